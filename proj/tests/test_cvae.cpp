#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "smotecls/cvae.hpp"

using namespace smotecls;

namespace {

struct FixedClassifier final : PseudoClassifier {
  std::vector<double> p;
  explicit FixedClassifier(std::vector<double> probs) : p(std::move(probs)) {}
  std::size_t n_classes() const override { return p.size(); }
  std::vector<double> predict_proba(std::span<const double>) const override { return p; }
  void save(std::ostream&) const override { throw std::logic_error("fixed classifier is test-only"); }
};

std::vector<double> random_simplex(std::size_t n, RngStream& rng) {
  std::vector<double> v(n);
  double sum = 0.0;
  for (auto& x : v) {
    x = 0.05 + rng.next_double();
    sum += x;
  }
  for (auto& x : v) x /= sum;
  return v;
}

double rel_error(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, da = 0.0, db = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    da += a[i] * a[i];
    db += b[i] * b[i];
  }
  return std::sqrt(num) / std::max({std::sqrt(da), std::sqrt(db), 1e-12});
}

}  // namespace

TEST_CASE("gaussian_kl identities") {
  const std::vector<double> mu{0.3, -1.0}, var{0.5, 2.0};
  CHECK(gaussian_kl(mu, var, mu, var) == doctest::Approx(0.0).epsilon(1e-15));

  const std::vector<double> mq{0.0}, vq{1.0}, mp{1.0}, vp{1.0};
  CHECK(gaussian_kl(mq, vq, mp, vp) == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(gaussian_kl(mq, {0.0}, mp, vp), std::invalid_argument);
}

TEST_CASE("gaussian_kl matches a Monte-Carlo estimate") {
  RngStream rng(101, 0);
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t h = 1 + rng.next_index(3);
    std::vector<double> mq(h), vq(h), mp(h), vp(h);
    for (std::size_t j = 0; j < h; ++j) {
      mq[j] = rng.next_gaussian();
      mp[j] = rng.next_gaussian();
      vq[j] = 0.3 + rng.next_double();
      vp[j] = 0.3 + rng.next_double();
    }
    const double closed = gaussian_kl(mq, vq, mp, vp);

    const int n = 100000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      double log_q = 0.0, log_p = 0.0;
      for (std::size_t j = 0; j < h; ++j) {
        const double x = mq[j] + std::sqrt(vq[j]) * rng.next_gaussian();
        log_q += -0.5 * std::log(2.0 * M_PI * vq[j]) - (x - mq[j]) * (x - mq[j]) / (2.0 * vq[j]);
        log_p += -0.5 * std::log(2.0 * M_PI * vp[j]) - (x - mp[j]) * (x - mp[j]) / (2.0 * vp[j]);
      }
      const double term = log_q - log_p;
      sum += term;
      sum_sq += term * term;
    }
    const double mc = sum / n;
    const double sd = std::sqrt((sum_sq / n - mc * mc) / n);
    CHECK(std::abs(closed - mc) < 3.0 * sd + 1e-6);
    CHECK(closed >= 0.0);
  }
}

namespace {

CvaeModel make_model(std::size_t d, std::size_t h, std::size_t n_classes,
                     std::vector<double> probs, std::uint64_t seed, bool disentangle = true) {
  RngStream rng(seed, 0);
  const GmmPrior prior = make_prior(h, n_classes == 4, disentangle, PriorPreset::Default, probs);
  auto classifier = std::make_shared<FixedClassifier>(std::move(probs));
  return CvaeModel(d, h, prior, classifier, rng);
}

}  // namespace

TEST_CASE("kl upper bound vanishes on matched distributions") {
  RngStream rng(102, 0);
  const std::vector<double> weights{0.4, 0.1, 0.3, 0.2};
  const CvaeModel model = make_model(3, 2, 4, weights, 7);

  CvaeModel::Encoded enc;
  for (std::size_t c = 0; c < 4; ++c)
    for (std::size_t j = 0; j < 2; ++j) {
      enc.means.push_back(model.prior().means[c][j]);
      enc.log_vars.push_back(std::log(model.prior().variances[c]));
    }
  CHECK(model.kl_upper_bound(enc, weights) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("one-hot weights reduce the bound to one component plus the log prior term") {
  const std::vector<double> weights{0.4, 0.1, 0.3, 0.2};
  const CvaeModel model = make_model(3, 2, 4, weights, 8);

  RngStream rng(103, 0);
  CvaeModel::Encoded enc;
  for (std::size_t i = 0; i < 8; ++i) {
    enc.means.push_back(rng.next_gaussian());
    enc.log_vars.push_back(0.3 * rng.next_gaussian());
  }
  const std::size_t c = 2;
  std::vector<double> one_hot(4, 0.0);
  one_hot[c] = 1.0;

  std::vector<double> var_q(2), var_p(2);
  for (std::size_t j = 0; j < 2; ++j) {
    var_q[j] = std::exp(enc.log_vars[c * 2 + j]);
    var_p[j] = model.prior().variances[c];
  }
  const double want =
      gaussian_kl(enc.mean_of(c, 2), var_q, model.prior().means[c], var_p) +
      std::log(1.0 / model.prior().weights[c]);
  CHECK(model.kl_upper_bound(enc, one_hot) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("kl upper bound equals a term-by-term recomputation and stays non-negative") {
  RngStream rng(104, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<double> weights = random_simplex(4, rng);
    const CvaeModel model = make_model(2, 2, 4, weights, 200 + static_cast<std::uint64_t>(trial));
    CvaeModel::Encoded enc;
    for (std::size_t i = 0; i < 8; ++i) {
      enc.means.push_back(rng.next_gaussian());
      enc.log_vars.push_back(0.5 * rng.next_gaussian());
    }
    const std::vector<double> w = random_simplex(4, rng);

    double want = 0.0;
    for (std::size_t c = 0; c < 4; ++c) {
      double kl = 0.0;
      for (std::size_t j = 0; j < 2; ++j) {
        const double vq = std::exp(enc.log_vars[c * 2 + j]);
        const double vp = model.prior().variances[c];
        const double dm = model.prior().means[c][j] - enc.means[c * 2 + j];
        kl += 0.5 * (vq / vp + dm * dm / vp - 1.0 + std::log(vp / vq));
      }
      want += w[c] * kl + w[c] * std::log(w[c] / model.prior().weights[c]);
    }
    const double got = model.kl_upper_bound(enc, w);
    CHECK(got == doctest::Approx(want).epsilon(1e-10));
    CHECK(got >= -1e-12);
  }
}

TEST_CASE("kl upper bound flags classifier weight on an impossible class") {
  std::vector<double> weights{0.5, 0.5, 0.0, 0.0};
  RngStream rng(105, 0);
  const GmmPrior prior = make_prior(2, true, true, PriorPreset::Default, weights);
  auto classifier = std::make_shared<FixedClassifier>(weights);
  RngStream model_rng(105, 1);
  const CvaeModel model(3, 2, prior, classifier, model_rng);

  CvaeModel::Encoded enc;
  enc.means.assign(8, 0.0);
  enc.log_vars.assign(8, 0.0);
  const std::vector<double> bad{0.25, 0.25, 0.25, 0.25};
  CHECK_THROWS_AS(model.kl_upper_bound(enc, bad), std::domain_error);
}

TEST_CASE("loss vanishes for a matched all-zero model on zero input") {
  std::vector<double> weights{0.5, 0.5};
  CvaeModel model = make_model(2, 1, 2, weights, 9, /*disentangle=*/false);
  std::vector<double> zeros(model.param_count(), 0.0);
  model.set_params(zeros);

  FeatureMatrix X(1, 2);  // all zeros
  const std::vector<std::size_t> rows{0};
  const std::vector<std::vector<double>> probs{weights};
  BatchDraws draws;
  draws.component = {1};
  draws.eps = {0.73};
  const double loss = cvae_loss(model, X, rows, probs, draws, 1.0, {});
  CHECK(loss == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("beta zero reduces the loss to mean L1 reconstruction") {
  RngStream rng(106, 0);
  const std::vector<double> weights{0.25, 0.25, 0.25, 0.25};
  CvaeModel model = make_model(3, 2, 4, weights, 10);

  FeatureMatrix X(4, 3);
  for (auto& v : X.values) v = rng.next_gaussian();
  std::vector<std::size_t> rows{0, 1, 2, 3};
  std::vector<std::vector<double>> probs(4, weights);
  RngStream draw_rng(106, 1);
  const BatchDraws draws = draw_batch(model, rows, probs, draw_rng);

  double want = 0.0;
  for (std::size_t bi = 0; bi < rows.size(); ++bi) {
    const auto enc = model.encode(X.row(rows[bi]));
    const std::size_t c = draws.component[bi];
    std::vector<double> z(2);
    for (std::size_t j = 0; j < 2; ++j)
      z[j] = enc.means[c * 2 + j] +
             std::exp(0.5 * enc.log_vars[c * 2 + j]) * draws.eps[bi * 2 + j];
    const auto xhat = model.decode(z);
    for (std::size_t j = 0; j < 3; ++j) want += std::abs(xhat[j] - X.at(rows[bi], j));
  }
  want /= 4.0;
  CHECK(cvae_loss(model, X, rows, probs, draws, 0.0, {}) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("loss gradient matches central finite differences") {
  RngStream rng(107, 0);
  const std::vector<double> weights{0.4, 0.3, 0.2, 0.1};
  CvaeModel model = make_model(5, 2, 4, weights, 11);

  FeatureMatrix X(6, 5);
  for (auto& v : X.values) v = rng.next_gaussian() + 0.137;
  std::vector<std::size_t> rows(6);
  std::iota(rows.begin(), rows.end(), 0);
  std::vector<std::vector<double>> probs;
  for (int i = 0; i < 6; ++i) probs.push_back(random_simplex(4, rng));
  RngStream draw_rng(107, 1);
  const BatchDraws draws = draw_batch(model, rows, probs, draw_rng);
  const double beta = 0.7;

  std::vector<double> grads(model.param_count(), 0.0);
  cvae_loss(model, X, rows, probs, draws, beta, grads);

  std::vector<double> params(model.param_count());
  model.get_params(params);
  std::vector<double> fd(model.param_count());
  const double step = 1e-5;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double orig = params[i];
    params[i] = orig + step;
    model.set_params(params);
    const double hi = cvae_loss(model, X, rows, probs, draws, beta, {});
    params[i] = orig - step;
    model.set_params(params);
    const double lo = cvae_loss(model, X, rows, probs, draws, beta, {});
    params[i] = orig;
    fd[i] = (hi - lo) / (2.0 * step);
  }
  model.set_params(params);
  CHECK(rel_error(grads, fd) < 1e-4);
}

TEST_CASE("component draws follow the classifier weights") {
  const std::vector<double> weights{0.1, 0.2, 0.3, 0.4};
  CvaeModel model = make_model(2, 2, 4, weights, 12);
  FeatureMatrix X(1, 2);
  const std::vector<std::vector<double>> probs{weights};
  std::vector<std::size_t> rows(10000, 0);
  RngStream rng(108, 0);
  const BatchDraws draws = draw_batch(model, rows, probs, rng);

  std::vector<double> counts(4, 0.0);
  for (auto c : draws.component) counts[c] += 1.0;
  for (std::size_t c = 0; c < 4; ++c) {
    const double n = 10000.0;
    const double sd = std::sqrt(weights[c] * (1.0 - weights[c]) * n);
    CHECK(std::abs(counts[c] - weights[c] * n) < 3.0 * sd);
  }
}

TEST_CASE("posterior sampling collapses to the head mean as variance vanishes") {
  std::vector<double> one_hot{0.0, 0.0, 1.0, 0.0};
  CvaeModel model = make_model(3, 2, 4, one_hot, 13);

  // force the log-variance head to a large negative constant
  std::vector<double> params(model.param_count());
  model.get_params(params);
  const std::size_t h = 2, C = 4;
  const std::size_t pc_trunk = model.trunk().param_count();
  const std::size_t pc_mean = (2 * h) * (C * h) + C * h;
  for (std::size_t i = 0; i < (2 * h) * (C * h); ++i) params[pc_trunk + pc_mean + i] = 0.0;
  for (std::size_t i = 0; i < C * h; ++i)
    params[pc_trunk + pc_mean + (2 * h) * (C * h) + i] = -40.0;
  model.set_params(params);

  const std::vector<double> x{0.3, -0.7, 1.1};
  const auto mean_embedding = model.embed(x);
  RngStream rng(109, 0);
  for (int i = 0; i < 20; ++i) {
    const auto z = model.sample_posterior(x, rng);
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(z[j] == doctest::Approx(mean_embedding.z[j]).epsilon(1e-8));
  }

  // fixed stream reproduces the draw
  RngStream r1(110, 0), r2(110, 0);
  CHECK(model.sample_posterior(x, r1) == model.sample_posterior(x, r2));
}

TEST_CASE("embed picks the argmax head deterministically") {
  std::vector<double> probs{0.05, 0.15, 0.7, 0.1};
  CvaeModel model = make_model(3, 2, 4, probs, 14);
  const std::vector<double> x{0.5, 0.5, -0.2};

  const auto e = model.embed(x);
  CHECK(e.component == 2);
  const auto enc = model.encode(x);
  CHECK(e.z[0] == enc.means[4]);
  CHECK(e.z[1] == enc.means[5]);
  CHECK(model.embed(x).z == e.z);

  // positive scaling of the scores leaves the component unchanged
  std::vector<double> scaled = probs;
  for (auto& v : scaled) v *= 37.5;
  CHECK(model.embed_with_proba(x, scaled).component == e.component);
}

TEST_CASE("decode is deterministic") {
  CvaeModel model = make_model(4, 2, 4, {0.25, 0.25, 0.25, 0.25}, 15);
  const std::vector<double> z{0.4, -1.2};
  CHECK(model.decode(z) == model.decode(z));
}

namespace {

FeatureMatrix two_cluster_data(std::size_t n, RngStream& rng) {
  FeatureMatrix X(0, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const bool right = i % 2 == 0;
    const double row[2] = {(right ? 1.0 : -1.0) + 0.1 * rng.next_gaussian(),
                           0.1 * rng.next_gaussian()};
    X.append_row(row);
  }
  return X;
}

}  // namespace

TEST_CASE("zero training epochs leave the model untouched") {
  CvaeModel model = make_model(2, 2, 4, {0.25, 0.25, 0.25, 0.25}, 16);
  std::vector<double> before(model.param_count());
  model.get_params(before);

  RngStream data_rng(111, 0);
  const FeatureMatrix X = two_cluster_data(12, data_rng);
  std::vector<std::vector<double>> probs(12, std::vector<double>{0.25, 0.25, 0.25, 0.25});
  CvaeTrainConfig cfg;
  cfg.epochs = 0;
  RngStream train_rng(111, 1);
  const TrainTrace trace = train_cvae(model, X, probs, cfg, train_rng);
  CHECK(trace.epoch_loss.empty());

  std::vector<double> after(model.param_count());
  model.get_params(after);
  CHECK(before == after);
}

TEST_CASE("training is deterministic and reduces the loss") {
  RngStream data_rng(112, 0);
  const FeatureMatrix X = two_cluster_data(40, data_rng);
  std::vector<std::vector<double>> probs;
  RngStream prob_rng(112, 1);
  for (int i = 0; i < 40; ++i) probs.push_back(random_simplex(4, prob_rng));

  CvaeTrainConfig cfg;
  cfg.epochs = 60;
  cfg.batch = 16;

  CvaeModel m1 = make_model(2, 2, 4, {0.25, 0.25, 0.25, 0.25}, 17);
  CvaeModel m2 = make_model(2, 2, 4, {0.25, 0.25, 0.25, 0.25}, 17);
  RngStream t1(113, 0), t2(113, 0);
  const TrainTrace trace1 = train_cvae(m1, X, probs, cfg, t1);
  const TrainTrace trace2 = train_cvae(m2, X, probs, cfg, t2);

  CHECK(trace1.epoch_loss == trace2.epoch_loss);
  std::vector<double> p1(m1.param_count()), p2(m2.param_count());
  m1.get_params(p1);
  m2.get_params(p2);
  CHECK(p1 == p2);

  CHECK(trace1.epoch_loss.back() < trace1.epoch_loss.front());
  for (double l : trace1.epoch_loss) CHECK(std::isfinite(l));
}

TEST_CASE("a memorizable set reconstructs through embed and decode") {
  RngStream data_rng(114, 0);
  FeatureMatrix X(0, 2);
  for (int i = 0; i < 10; ++i) {
    const double row[2] = {std::cos(0.63 * i), std::sin(0.63 * i)};
    X.append_row(row);
  }
  // two latent groups split by position
  std::vector<std::vector<double>> probs;
  for (int i = 0; i < 10; ++i) {
    std::vector<double> p(4, 0.0);
    p[i % 2 == 0 ? 2 : 3] = 1.0;
    probs.push_back(p);
  }
  std::vector<double> weights{0.0, 0.0, 0.5, 0.5};
  RngStream model_rng(114, 1);
  const GmmPrior prior = make_prior(2, true, true, PriorPreset::Default, weights);
  // classifier probabilities vary per row, so wire them through a lookup
  struct LookupClassifier final : PseudoClassifier {
    const FeatureMatrix* X;
    const std::vector<std::vector<double>>* probs;
    std::size_t n_classes() const override { return 4; }
    std::vector<double> predict_proba(std::span<const double> x) const override {
      for (std::size_t i = 0; i < X->rows; ++i)
        if (std::equal(x.begin(), x.end(), X->row(i).begin())) return (*probs)[i];
      return {0.0, 0.0, 1.0, 0.0};
    }
    void save(std::ostream&) const override { throw std::logic_error("test-only"); }
  };
  auto classifier = std::make_shared<LookupClassifier>();
  classifier->X = &X;
  classifier->probs = &probs;
  CvaeModel model(2, 2, prior, classifier, model_rng);

  CvaeTrainConfig cfg;
  cfg.epochs = 1500;
  cfg.batch = 10;
  cfg.beta = 0.05;
  cfg.learning_rate = 5e-3;
  RngStream train_rng(114, 2);
  train_cvae(model, X, probs, cfg, train_rng);

  double total_l1 = 0.0;
  for (std::size_t i = 0; i < X.rows; ++i) {
    const auto z = model.embed_with_proba(X.row(i), probs[i]);
    const auto xhat = model.decode(z.z);
    for (std::size_t j = 0; j < 2; ++j) total_l1 += std::abs(xhat[j] - X.at(i, j));
  }
  CHECK(total_l1 / (10.0 * 2.0) < 0.1);  // mean L1 per coordinate
}

TEST_CASE("checkpoint round trip preserves behavior") {
  // a real forest classifier so the checkpoint embeds something loadable
  RngStream forest_rng(115, 0);
  FeatureMatrix X(20, 3);
  for (auto& v : X.values) v = forest_rng.next_double();
  std::vector<int> y;
  for (int i = 0; i < 20; ++i) y.push_back(static_cast<int>(forest_rng.next_index(4)));
  ForestSpec fspec;
  fspec.n_trees = 5;
  auto classifier = std::make_shared<ForestPseudoClassifier>(
      RandomForest::fit(X, y, 4, fspec, forest_rng));

  std::vector<double> weights(4, 0.25);
  const GmmPrior prior = make_prior(2, true, true, PriorPreset::Default, weights);
  RngStream model_rng(115, 1);
  const CvaeModel model(3, 2, prior, classifier, model_rng);

  std::stringstream buffer;
  model.save(buffer);
  const CvaeModel loaded = CvaeModel::load(buffer);

  CHECK(loaded.input_dim() == 3);
  CHECK(loaded.latent_dim() == 2);
  for (int trial = 0; trial < 5; ++trial) {
    RngStream rng(116, static_cast<std::uint64_t>(trial));
    std::vector<double> x{rng.next_double(), rng.next_double(), rng.next_double()};
    CHECK(model.embed(x).z == loaded.embed(x).z);
    CHECK(model.classifier_proba(x) == loaded.classifier_proba(x));
    const std::vector<double> z{rng.next_gaussian(), rng.next_gaussian()};
    CHECK(model.decode(z) == loaded.decode(z));
  }
}

TEST_CASE("latent dimension rule") {
  CHECK(auto_latent_dim(7) == 2);
  CHECK(auto_latent_dim(90) == 2);
  CHECK(auto_latent_dim(91) == 4);
  CHECK(auto_latent_dim(617) == 4);
}

TEST_CASE("the two-component ablation prior sits at the documented corners") {
  const GmmPrior p = make_prior(2, false, true, PriorPreset::Default, {0.8, 0.2});
  REQUIRE(p.n_classes() == 2);
  CHECK(p.means[0] == std::vector<double>{1.0, 1.0});    // major
  CHECK(p.means[1] == std::vector<double>{-1.0, -1.0});  // minor
  CHECK(p.variances[0] == 0.1);

  const GmmPrior flat = make_prior(2, false, false, PriorPreset::Default, {0.8, 0.2});
  CHECK(flat.means[0] == std::vector<double>{0.0, 0.0});
  CHECK(flat.variances[0] == 1.0);
}

TEST_CASE("four-component prior presets place the documented means") {
  const std::vector<double> w(4, 0.25);
  const GmmPrior def = make_prior(2, true, true, PriorPreset::Default, w);
  CHECK(def.means[0] == std::vector<double>{-1.0, 1.0});   // easy major
  CHECK(def.means[1] == std::vector<double>{1.0, 1.0});    // hard major
  CHECK(def.means[2] == std::vector<double>{1.0, -1.0});   // easy minor
  CHECK(def.means[3] == std::vector<double>{-1.0, -1.0});  // hard minor

  const GmmPrior merged = make_prior(2, true, true, PriorPreset::Merged, w);
  CHECK(merged.means[0] == merged.means[1]);
  CHECK(merged.means[2] == merged.means[3]);

  const GmmPrior wide4 = make_prior(4, true, true, PriorPreset::Default, w);
  CHECK(wide4.means[0] == std::vector<double>{-1.0, 1.0, -1.0, 1.0});  // pattern repeats
}
