#include "smotecls/cvae.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace smotecls {

namespace {

void write_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
std::uint64_t read_u64(std::istream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) throw std::runtime_error("model file truncated");
  return v;
}
void write_f64_vec(std::ostream& out, const std::vector<double>& v) {
  write_u64(out, v.size());
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
}
std::vector<double> read_f64_vec(std::istream& in) {
  std::vector<double> v(read_u64(in));
  in.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(v.size() * sizeof(double)));
  if (!in) throw std::runtime_error("model file truncated");
  return v;
}

}  // namespace

void GmmPrior::validate() const {
  if (means.size() != variances.size() || means.size() != weights.size() || means.empty())
    throw std::invalid_argument("GmmPrior: inconsistent component counts");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("GmmPrior: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("GmmPrior: weights must sum to 1");
  for (double v : variances)
    if (!(v > 0.0)) throw std::invalid_argument("GmmPrior: variances must be positive");
  for (const auto& m : means)
    if (m.size() != latent_dim) throw std::invalid_argument("GmmPrior: mean length mismatch");
}

void GmmPrior::save(std::ostream& out) const {
  write_u64(out, latent_dim);
  write_u64(out, means.size());
  for (const auto& m : means) write_f64_vec(out, m);
  write_f64_vec(out, variances);
  write_f64_vec(out, weights);
}

GmmPrior GmmPrior::load(std::istream& in) {
  GmmPrior p;
  p.latent_dim = read_u64(in);
  p.means.resize(read_u64(in));
  for (auto& m : p.means) m = read_f64_vec(in);
  p.variances = read_f64_vec(in);
  p.weights = read_f64_vec(in);
  p.validate();
  return p;
}

PriorPreset prior_preset_from_name(const std::string& name) {
  if (name == "default") return PriorPreset::Default;
  if (name == "wide") return PriorPreset::Wide;
  if (name == "axes") return PriorPreset::Axes;
  if (name == "merged") return PriorPreset::Merged;
  throw std::invalid_argument("unknown prior preset '" + name +
                              "' (expected default, wide, axes or merged)");
}

const char* prior_preset_name(PriorPreset p) {
  switch (p) {
    case PriorPreset::Default: return "default";
    case PriorPreset::Wide: return "wide";
    case PriorPreset::Axes: return "axes";
    case PriorPreset::Merged: return "merged";
  }
  return "?";
}

namespace {

// 2D mean pattern per pseudo class, order (M, M*, m, m*).
std::array<std::array<double, 2>, 4> preset_pattern(PriorPreset preset) {
  switch (preset) {
    case PriorPreset::Default:
      return {{{-1, 1}, {1, 1}, {1, -1}, {-1, -1}}};
    case PriorPreset::Wide:
      return {{{-1, 2}, {-1, -2}, {1, 2}, {1, -2}}};
    case PriorPreset::Axes:
      return {{{-1, 1}, {1, 1}, {-1, -1}, {1, -1}}};
    case PriorPreset::Merged:
      return {{{-1, 1}, {-1, 1}, {1, -1}, {1, -1}}};
  }
  throw std::invalid_argument("bad prior preset");
}

}  // namespace

GmmPrior make_prior(std::size_t latent_dim, bool four_class, bool disentangle, PriorPreset preset,
                    const std::vector<double>& class_weights, double variance) {
  const std::size_t n_classes = four_class ? 4 : 2;
  if (class_weights.size() != n_classes)
    throw std::invalid_argument("make_prior: class weight count mismatch");

  GmmPrior prior;
  prior.latent_dim = latent_dim;
  prior.weights = class_weights;
  prior.variances.assign(n_classes, disentangle ? variance : 1.0);
  prior.means.assign(n_classes, std::vector<double>(latent_dim, 0.0));
  if (disentangle) {
    if (four_class) {
      const auto pattern = preset_pattern(preset);
      for (std::size_t c = 0; c < 4; ++c)
        for (std::size_t j = 0; j < latent_dim; ++j) prior.means[c][j] = pattern[c][j % 2];
    } else {
      // two-component placement: major at (1,1,...), minor at (-1,-1,...)
      for (std::size_t j = 0; j < latent_dim; ++j) {
        prior.means[0][j] = 1.0;
        prior.means[1][j] = -1.0;
      }
    }
  }
  prior.validate();
  return prior;
}

void ForestPseudoClassifier::save(std::ostream& out) const {
  write_u64(out, 0);
  forest_.save(out);
}

void MlpPseudoClassifier::save(std::ostream& out) const {
  write_u64(out, 1);
  net_.save(out);
}

std::unique_ptr<PseudoClassifier> load_pseudo_classifier(std::istream& in) {
  const std::uint64_t tag = read_u64(in);
  if (tag == 0) return std::make_unique<ForestPseudoClassifier>(RandomForest::load(in));
  if (tag == 1) return std::make_unique<MlpPseudoClassifier>(DenseNet::load(in));
  throw std::runtime_error("unknown classifier tag in model file");
}

std::unique_ptr<PseudoClassifier> fit_mlp_classifier(const FeatureMatrix& X,
                                                     const std::vector<int>& y, int n_classes,
                                                     const MlpTrainConfig& config, RngStream& rng) {
  std::vector<std::size_t> widths;
  widths.push_back(X.cols);
  for (auto h : config.hidden) widths.push_back(h);
  widths.push_back(static_cast<std::size_t>(n_classes));
  std::vector<Activation> acts(widths.size() - 1, Activation::Relu);
  acts.back() = Activation::Softmax;

  RngStream init_rng = rng.split(1);
  DenseNet net = DenseNet::make(widths, acts, init_rng);

  const std::size_t n = X.rows;
  const std::size_t pc = net.param_count();
  std::vector<double> params(pc), grads(pc);
  net.get_params(params);
  Optimizer opt(OptMethod::Adam, config.learning_rate, pc);

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  RngStream shuffle_rng = rng.split(2);
  ForwardCache cache;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_rng.shuffle(perm);
    for (std::size_t start = 0; start < n; start += config.batch) {
      const std::size_t end = std::min(n, start + config.batch);
      std::fill(grads.begin(), grads.end(), 0.0);
      for (std::size_t i = start; i < end; ++i) {
        const std::size_t r = perm[i];
        const auto out = nn_forward(net, X.row(r), &cache);
        std::vector<double> upstream(out.size(), 0.0);
        const auto t = static_cast<std::size_t>(y[r]);
        upstream[t] = -1.0 / std::max(out[t], 1e-12);
        nn_backward(net, cache, upstream, grads);
      }
      const double scale = 1.0 / static_cast<double>(end - start);
      for (auto& g : grads) g *= scale;
      opt.step(params, grads);
      net.set_params(params);
    }
  }
  return std::make_unique<MlpPseudoClassifier>(std::move(net));
}

double gaussian_kl(std::span<const double> mu_q, std::span<const double> var_q,
                   std::span<const double> mu_p, std::span<const double> var_p) {
  const std::size_t h = mu_q.size();
  if (var_q.size() != h || mu_p.size() != h || var_p.size() != h)
    throw std::invalid_argument("gaussian_kl: length mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < h; ++j) {
    if (!(var_q[j] > 0.0) || !(var_p[j] > 0.0))
      throw std::invalid_argument("gaussian_kl: variances must be positive");
    const double dm = mu_p[j] - mu_q[j];
    s += var_q[j] / var_p[j] + dm * dm / var_p[j] - 1.0 + std::log(var_p[j] / var_q[j]);
  }
  return 0.5 * s;
}

CvaeModel::CvaeModel(std::size_t input_dim, std::size_t latent_dim, GmmPrior prior,
                     std::shared_ptr<const PseudoClassifier> classifier, RngStream& rng)
    : input_dim_(input_dim), latent_dim_(latent_dim), prior_(std::move(prior)),
      classifier_(std::move(classifier)) {
  prior_.validate();
  if (prior_.latent_dim != latent_dim_) throw std::invalid_argument("CvaeModel: prior dim mismatch");
  if (classifier_ == nullptr) throw std::invalid_argument("CvaeModel: classifier required");
  if (classifier_->n_classes() != prior_.n_classes())
    throw std::invalid_argument("CvaeModel: classifier and prior class counts differ");

  const std::size_t h = latent_dim_, d = input_dim_, C = prior_.n_classes();
  RngStream r1 = rng.split(1), r2 = rng.split(2), r3 = rng.split(3), r4 = rng.split(4);
  trunk_ = DenseNet::make({d, 8 * h, 4 * h, 2 * h},
                          {Activation::Relu, Activation::Relu, Activation::Relu}, r1);
  mean_heads_ = DenseNet::make({2 * h, C * h}, {Activation::Linear}, r2);
  logvar_heads_ = DenseNet::make({2 * h, C * h}, {Activation::Linear}, r3);
  decoder_ = DenseNet::make({h, 2 * h, 4 * h, 8 * h, d},
                            {Activation::Relu, Activation::Relu, Activation::Relu,
                             Activation::Linear},
                            r4);
}

CvaeModel::Encoded CvaeModel::encode(std::span<const double> x) const {
  const std::vector<double> t = nn_forward(trunk_, x);
  Encoded enc;
  enc.means = nn_forward(mean_heads_, t);
  enc.log_vars = nn_forward(logvar_heads_, t);
  return enc;
}

double CvaeModel::kl_upper_bound(const Encoded& enc, std::span<const double> weights) const {
  const std::size_t C = prior_.n_classes(), h = latent_dim_;
  if (weights.size() != C) throw std::invalid_argument("kl_upper_bound: weight count mismatch");

  double total = 0.0;
  std::vector<double> var_q(h), var_p(h);
  for (std::size_t c = 0; c < C; ++c) {
    if (weights[c] == 0.0) continue;
    if (prior_.weights[c] == 0.0)
      throw std::domain_error(
          "degenerate input: classifier puts weight on a zero-probability prior class");
    for (std::size_t j = 0; j < h; ++j) {
      var_q[j] = std::exp(enc.log_vars[c * h + j]);
      var_p[j] = prior_.variances[c];
    }
    total += weights[c] * gaussian_kl(enc.mean_of(c, h), var_q, prior_.means[c], var_p);
    total += weights[c] * std::log(weights[c] / prior_.weights[c]);
  }
  return total;
}

CvaeModel::Embedding CvaeModel::embed_with_proba(std::span<const double> x,
                                                 std::span<const double> proba) const {
  const std::size_t c = static_cast<std::size_t>(
      std::max_element(proba.begin(), proba.end()) - proba.begin());
  const std::vector<double> t = nn_forward(trunk_, x);
  const std::vector<double> means = nn_forward(mean_heads_, t);
  Embedding e;
  e.component = c;
  e.z.assign(means.begin() + static_cast<std::ptrdiff_t>(c * latent_dim_),
             means.begin() + static_cast<std::ptrdiff_t>((c + 1) * latent_dim_));
  return e;
}

CvaeModel::Embedding CvaeModel::embed(std::span<const double> x) const {
  return embed_with_proba(x, classifier_->predict_proba(x));
}

std::vector<double> CvaeModel::sample_posterior(std::span<const double> x, RngStream& rng) const {
  const std::vector<double> w = classifier_->predict_proba(x);
  const double u = rng.next_double();
  std::size_t c = w.size() - 1;
  double acc = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    acc += w[k];
    if (u < acc) {
      c = k;
      break;
    }
  }
  const Encoded enc = encode(x);
  std::vector<double> z(latent_dim_);
  for (std::size_t j = 0; j < latent_dim_; ++j) {
    const double sigma = std::exp(0.5 * enc.log_vars[c * latent_dim_ + j]);
    z[j] = enc.means[c * latent_dim_ + j] + sigma * rng.next_gaussian();
  }
  return z;
}

std::vector<double> CvaeModel::decode(std::span<const double> z) const {
  return nn_forward(decoder_, z);
}

std::size_t CvaeModel::param_count() const {
  return trunk_.param_count() + mean_heads_.param_count() + logvar_heads_.param_count() +
         decoder_.param_count();
}

void CvaeModel::get_params(std::span<double> out) const {
  std::size_t k = 0;
  for (const DenseNet* net : {&trunk_, &mean_heads_, &logvar_heads_, &decoder_}) {
    net->get_params(out.subspan(k, net->param_count()));
    k += net->param_count();
  }
}

void CvaeModel::set_params(std::span<const double> in) {
  std::size_t k = 0;
  for (DenseNet* net : {&trunk_, &mean_heads_, &logvar_heads_, &decoder_}) {
    net->set_params(in.subspan(k, net->param_count()));
    k += net->param_count();
  }
}

void CvaeModel::save(std::ostream& out) const {
  static const char magic[8] = {'S', 'C', 'L', 'S', 'V', 'A', 'E', '1'};
  out.write(magic, sizeof(magic));
  write_u64(out, input_dim_);
  write_u64(out, latent_dim_);
  prior_.save(out);
  trunk_.save(out);
  mean_heads_.save(out);
  logvar_heads_.save(out);
  decoder_.save(out);
  classifier_->save(out);
}

CvaeModel CvaeModel::load(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::string(magic, 8) != "SCLSVAE1")
    throw std::runtime_error("not a cvae model file");
  CvaeModel m;
  m.input_dim_ = read_u64(in);
  m.latent_dim_ = read_u64(in);
  m.prior_ = GmmPrior::load(in);
  m.trunk_ = DenseNet::load(in);
  m.mean_heads_ = DenseNet::load(in);
  m.logvar_heads_ = DenseNet::load(in);
  m.decoder_ = DenseNet::load(in);
  m.classifier_ = load_pseudo_classifier(in);
  return m;
}

BatchDraws draw_batch(const CvaeModel& model, std::span<const std::size_t> rows,
                      const std::vector<std::vector<double>>& class_probs, RngStream& rng) {
  BatchDraws draws;
  draws.component.reserve(rows.size());
  draws.eps.reserve(rows.size() * model.latent_dim());
  for (const std::size_t r : rows) {
    const auto& w = class_probs[r];
    const double u = rng.next_double();
    std::size_t c = w.size() - 1;
    double acc = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      acc += w[k];
      if (u < acc) {
        c = k;
        break;
      }
    }
    draws.component.push_back(c);
    for (std::size_t j = 0; j < model.latent_dim(); ++j) draws.eps.push_back(rng.next_gaussian());
  }
  return draws;
}

struct CvaeLossEval {
  static double run(const CvaeModel& model, const FeatureMatrix& X,
                    std::span<const std::size_t> rows,
                    const std::vector<std::vector<double>>& class_probs, const BatchDraws& draws,
                    double beta, std::span<double> param_grads) {
    const std::size_t h = model.latent_dim_, C = model.prior_.n_classes();
    const bool want_grads = !param_grads.empty();
    const std::size_t pc_trunk = model.trunk_.param_count();
    const std::size_t pc_mean = model.mean_heads_.param_count();
    const std::size_t pc_logvar = model.logvar_heads_.param_count();
    const std::size_t pc_dec = model.decoder_.param_count();
    if (want_grads && param_grads.size() != pc_trunk + pc_mean + pc_logvar + pc_dec)
      throw std::invalid_argument("cvae_loss: gradient buffer size mismatch");

    auto grads_trunk = want_grads ? param_grads.subspan(0, pc_trunk) : std::span<double>{};
    auto grads_mean = want_grads ? param_grads.subspan(pc_trunk, pc_mean) : std::span<double>{};
    auto grads_logvar =
        want_grads ? param_grads.subspan(pc_trunk + pc_mean, pc_logvar) : std::span<double>{};
    auto grads_dec = want_grads ? param_grads.subspan(pc_trunk + pc_mean + pc_logvar, pc_dec)
                                : std::span<double>{};

    double total = 0.0;
    ForwardCache trunk_cache, mean_cache, logvar_cache, dec_cache;
    for (std::size_t bi = 0; bi < rows.size(); ++bi) {
      const std::size_t r = rows[bi];
      const auto x = X.row(r);
      const auto& w = class_probs[r];
      const std::size_t pick = draws.component[bi];
      const std::span<const double> eps{draws.eps.data() + bi * h, h};

      const auto t = nn_forward(model.trunk_, x, want_grads ? &trunk_cache : nullptr);
      const auto means = nn_forward(model.mean_heads_, t, want_grads ? &mean_cache : nullptr);
      const auto log_vars =
          nn_forward(model.logvar_heads_, t, want_grads ? &logvar_cache : nullptr);

      std::vector<double> z(h), sigma(h);
      for (std::size_t j = 0; j < h; ++j) {
        sigma[j] = std::exp(0.5 * log_vars[pick * h + j]);
        z[j] = means[pick * h + j] + sigma[j] * eps[j];
      }
      const auto xhat = nn_forward(model.decoder_, z, want_grads ? &dec_cache : nullptr);

      double recon = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) recon += std::abs(xhat[j] - x[j]);

      // KL upper bound, expanded per component
      double kl = 0.0;
      for (std::size_t c = 0; c < C; ++c) {
        if (w[c] == 0.0) continue;
        if (model.prior_.weights[c] == 0.0)
          throw std::domain_error(
              "degenerate input: classifier puts weight on a zero-probability prior class");
        const double var_p = model.prior_.variances[c];
        double comp = 0.0;
        for (std::size_t j = 0; j < h; ++j) {
          const double lv = log_vars[c * h + j];
          const double var_q = std::exp(lv);
          const double dm = model.prior_.means[c][j] - means[c * h + j];
          comp += var_q / var_p + dm * dm / var_p - 1.0 + std::log(var_p) - lv;
        }
        kl += w[c] * 0.5 * comp;
        kl += w[c] * std::log(w[c] / model.prior_.weights[c]);
      }
      total += recon + beta * kl;

      if (!want_grads) continue;

      // reconstruction path: decoder, then the picked head pair
      std::vector<double> dxhat(x.size());
      for (std::size_t j = 0; j < x.size(); ++j) {
        const double diff = xhat[j] - x[j];
        dxhat[j] = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
      }
      const std::vector<double> dz = nn_backward(model.decoder_, dec_cache, dxhat, grads_dec);

      std::vector<double> dmeans(C * h, 0.0), dlogvars(C * h, 0.0);
      for (std::size_t j = 0; j < h; ++j) {
        dmeans[pick * h + j] += dz[j];
        dlogvars[pick * h + j] += dz[j] * eps[j] * 0.5 * sigma[j];
      }
      // KL path touches every component with nonzero weight
      for (std::size_t c = 0; c < C; ++c) {
        if (w[c] == 0.0) continue;
        const double var_p = model.prior_.variances[c];
        for (std::size_t j = 0; j < h; ++j) {
          const double lv = log_vars[c * h + j];
          const double var_q = std::exp(lv);
          const double dm = means[c * h + j] - model.prior_.means[c][j];
          dmeans[c * h + j] += beta * w[c] * dm / var_p;
          dlogvars[c * h + j] += beta * w[c] * 0.5 * (var_q / var_p - 1.0);
        }
      }

      std::vector<double> dtrunk = nn_backward(model.mean_heads_, mean_cache, dmeans, grads_mean);
      const std::vector<double> dtrunk2 =
          nn_backward(model.logvar_heads_, logvar_cache, dlogvars, grads_logvar);
      for (std::size_t j = 0; j < dtrunk.size(); ++j) dtrunk[j] += dtrunk2[j];
      nn_backward(model.trunk_, trunk_cache, dtrunk, grads_trunk);
    }

    const double inv_n = 1.0 / static_cast<double>(rows.size());
    if (want_grads)
      for (auto& g : param_grads) g *= inv_n;
    return total * inv_n;
  }
};

double cvae_loss(const CvaeModel& model, const FeatureMatrix& X, std::span<const std::size_t> rows,
                 const std::vector<std::vector<double>>& class_probs, const BatchDraws& draws,
                 double beta, std::span<double> param_grads) {
  if (rows.empty()) throw std::invalid_argument("cvae_loss: empty batch");
  return CvaeLossEval::run(model, X, rows, class_probs, draws, beta, param_grads);
}

TrainTrace train_cvae(CvaeModel& model, const FeatureMatrix& X,
                      const std::vector<std::vector<double>>& class_probs,
                      const CvaeTrainConfig& config, RngStream& rng) {
  if (X.rows == 0) throw std::invalid_argument("train_cvae: empty data");
  if (class_probs.size() != X.rows)
    throw std::invalid_argument("train_cvae: classifier output count mismatch");
  if (config.batch < 1) throw std::invalid_argument("train_cvae: batch must be >= 1");

  const std::size_t n = X.rows, pc = model.param_count();
  std::vector<double> params(pc), grads(pc);
  model.get_params(params);
  Optimizer opt(config.optimizer, config.learning_rate, pc);

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);

  TrainTrace trace;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(perm);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < n; start += config.batch) {
      const std::size_t end = std::min(n, start + config.batch);
      const std::span<const std::size_t> rows{perm.data() + start, end - start};
      const BatchDraws draws = draw_batch(model, rows, class_probs, rng);
      std::fill(grads.begin(), grads.end(), 0.0);
      const double loss = cvae_loss(model, X, rows, class_probs, draws, config.beta, grads);
      if (!std::isfinite(loss))
        throw std::runtime_error("train_cvae: loss diverged at epoch " + std::to_string(epoch));
      opt.step(params, grads);
      model.set_params(params);
      loss_sum += loss * static_cast<double>(rows.size());
    }
    trace.epoch_loss.push_back(loss_sum / static_cast<double>(n));
  }
  return trace;
}

std::size_t auto_latent_dim(std::size_t n_features) { return n_features > 90 ? 4 : 2; }

}  // namespace smotecls
