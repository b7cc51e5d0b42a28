#include "smotecls/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace smotecls {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}

Strategy strategy_from_name(const std::string& name) {
  if (name == "smote") return Strategy::Smote;
  if (name == "bsmote") return Strategy::BorderlineSmote;
  if (name == "smote_enn") return Strategy::SmoteEnn;
  if (name == "kmsmote") return Strategy::KMeansSmote;
  if (name == "smote_cls") return Strategy::SmoteCls;
  if (name == "dfbs_filter_smote") return Strategy::DfbsFilterSmote;
  if (name == "ddhs_filter_smote") return Strategy::DdhsFilterSmote;
  if (name == "latent_smote_decode") return Strategy::LatentSmoteDecode;
  if (name == "cvae_generate") return Strategy::CvaeGenerate;
  std::string valid;
  for (const auto& s : known_strategy_names()) valid += (valid.empty() ? "" : ", ") + s;
  throw std::invalid_argument("unknown strategy '" + name + "' (valid: " + valid + ")");
}

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Smote: return "smote";
    case Strategy::BorderlineSmote: return "bsmote";
    case Strategy::SmoteEnn: return "smote_enn";
    case Strategy::KMeansSmote: return "kmsmote";
    case Strategy::SmoteCls: return "smote_cls";
    case Strategy::DfbsFilterSmote: return "dfbs_filter_smote";
    case Strategy::DdhsFilterSmote: return "ddhs_filter_smote";
    case Strategy::LatentSmoteDecode: return "latent_smote_decode";
    case Strategy::CvaeGenerate: return "cvae_generate";
  }
  return "?";
}

std::vector<std::string> known_strategy_names() {
  return {"smote",     "bsmote",           "smote_enn",
          "kmsmote",   "smote_cls",        "smote_cls_no_dis",
          "smote_cls_no_seg", "smote_cls_no_af", "dfbs_filter_smote",
          "ddhs_filter_smote", "latent_smote_decode", "cvae_generate"};
}

OversampleConfig config_for_strategy(const std::string& name, OversampleConfig base) {
  if (name == "smote_cls_no_dis") {
    base.strategy = Strategy::SmoteCls;
    base.filter.disentangle = false;
    base.filter.segment = false;
    base.filter.adaptive = false;
    return base;
  }
  if (name == "smote_cls_no_seg") {
    base.strategy = Strategy::SmoteCls;
    base.filter.disentangle = true;
    base.filter.segment = false;
    base.filter.adaptive = false;
    return base;
  }
  if (name == "smote_cls_no_af") {
    base.strategy = Strategy::SmoteCls;
    base.filter.disentangle = true;
    base.filter.segment = true;
    base.filter.adaptive = false;
    return base;
  }
  base.strategy = strategy_from_name(name);
  return base;
}

std::size_t FilterReport::kept_count() const {
  std::size_t n = 0;
  for (const auto& e : entries)
    if (e.kept) ++n;
  return n;
}

std::vector<double> smote_interpolate(std::span<const double> x, std::span<const double> nn,
                                      double u) {
  if (x.size() != nn.size()) throw std::invalid_argument("smote_interpolate: dimension mismatch");
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = x[j] + u * (nn[j] - x[j]);
  return out;
}

FeatureMatrix smote_synthesize(const FeatureMatrix& candidates, std::size_t target, std::size_t k,
                               RngStream& rng, const std::vector<std::size_t>* seeds) {
  FeatureMatrix out(0, candidates.cols);
  if (target == 0) return out;
  if (candidates.rows < 2)
    throw std::runtime_error("insufficient minority support (need at least 2 candidates)");
  if (k < 1) throw std::invalid_argument("smote: k must be >= 1");

  std::vector<std::size_t> all;
  if (seeds == nullptr) {
    all.resize(candidates.rows);
    std::iota(all.begin(), all.end(), 0);
  }
  const std::vector<std::size_t>& seed_rows = seeds != nullptr ? *seeds : all;
  if (seed_rows.empty()) throw std::runtime_error("smote: empty seed set");

  const std::size_t k_eff = std::min(k, candidates.rows - 1);
  NeighborIndex index(candidates);
  std::vector<std::vector<Neighbor>> neighbor_lists(candidates.rows);
  for (std::size_t s : seed_rows)
    if (neighbor_lists[s].empty()) neighbor_lists[s] = index.query_excluding(s, k_eff);

  out.values.reserve(target * candidates.cols);
  for (std::size_t t = 0; t < target; ++t) {
    const std::size_t s = seed_rows[rng.next_index(seed_rows.size())];
    const Neighbor nb = neighbor_lists[s][rng.next_index(k_eff)];
    const double u = rng.next_double();
    out.append_row(smote_interpolate(candidates.row(s), candidates.row(nb.index), u));
  }
  return out;
}

std::vector<std::size_t> borderline_danger(const LabeledDataset& data, std::size_t k) {
  if (data.size() <= k) throw std::invalid_argument("borderline: need more than k rows");
  NeighborIndex index(data.features);
  std::vector<std::size_t> danger;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.labels[i] != ClassLabel::Minor) continue;
    const auto nbs = index.query_excluding(i, k);
    std::size_t majors = 0;
    for (const auto& nb : nbs)
      if (data.labels[nb.index] == ClassLabel::Major) ++majors;
    if (majors < k && 2 * majors >= k) danger.push_back(i);
  }
  return danger;
}

std::vector<std::size_t> dfbs_retained(const FeatureMatrix& latents,
                                       const std::vector<ClassLabel>& labels) {
  if (latents.rows != labels.size()) throw std::invalid_argument("dfbs: label count mismatch");
  const std::size_t h = latents.cols;
  std::vector<double> center_major(h, 0.0), center_minor(h, 0.0);
  std::size_t n_major = 0, n_minor = 0;
  for (std::size_t i = 0; i < latents.rows; ++i) {
    auto& center = labels[i] == ClassLabel::Major ? center_major : center_minor;
    (labels[i] == ClassLabel::Major ? n_major : n_minor)++;
    for (std::size_t j = 0; j < h; ++j) center[j] += latents.at(i, j);
  }
  if (n_major == 0 || n_minor == 0) throw std::invalid_argument("dfbs: empty class");
  for (std::size_t j = 0; j < h; ++j) {
    center_major[j] /= static_cast<double>(n_major);
    center_minor[j] /= static_cast<double>(n_minor);
  }
  std::vector<std::size_t> retained;
  for (std::size_t i = 0; i < latents.rows; ++i) {
    if (labels[i] != ClassLabel::Minor) continue;
    const double d_major = euclidean_distance(latents.row(i), center_major);
    const double d_minor = euclidean_distance(latents.row(i), center_minor);
    if (d_major > d_minor) retained.push_back(i);
  }
  return retained;
}

std::vector<std::size_t> ddhs_retained(const FeatureMatrix& minor_latents, double retain_fraction) {
  if (minor_latents.rows < 2) throw std::invalid_argument("ddhs: need at least 2 minors");
  const KernelDensity kde = KernelDensity::fit(minor_latents);
  return retain_by_quantile(kde, minor_latents, retain_fraction).retained;
}

FilterReport group_adaptive_filter(const FeatureMatrix& minor_latents,
                                   const std::vector<std::size_t>& minor_rows,
                                   const std::vector<PseudoLabel>& minor_groups,
                                   const FilterConfig& config) {
  const std::size_t n = minor_latents.rows;
  if (n == 0) throw std::invalid_argument("group_adaptive_filter: zero minors");
  if (minor_rows.size() != n || minor_groups.size() != n)
    throw std::invalid_argument("group_adaptive_filter: length mismatch");

  FilterReport report;
  report.entries.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    report.entries[i] = {minor_rows[i], minor_groups[i], kNan, true};
  report.easy_threshold = -std::numeric_limits<double>::infinity();
  report.hard_threshold = -std::numeric_limits<double>::infinity();

  auto gather = [&](const std::vector<std::size_t>& members) {
    FeatureMatrix m(0, minor_latents.cols);
    for (auto i : members) m.append_row(minor_latents.row(i));
    return m;
  };

  auto apply = [&](const std::vector<std::size_t>& members, double retain_fraction,
                   std::optional<double> raw_threshold, double& threshold_out) {
    if (members.empty()) return;  // empty group: skipped, contributes nothing
    if (members.size() == 1) {
      // a single point carries no density evidence against itself; keep it
      report.entries[members[0]].kept = true;
      return;
    }
    const FeatureMatrix pts = gather(members);
    const KernelDensity kde = KernelDensity::fit(pts);
    if (raw_threshold.has_value()) {
      threshold_out = *raw_threshold;
      for (std::size_t i = 0; i < members.size(); ++i) {
        const double d = kde.density_at(pts.row(i));
        report.entries[members[i]].density = d;
        report.entries[members[i]].kept = d > *raw_threshold;
      }
      return;
    }
    const QuantileFilter qf = retain_by_quantile(kde, pts, retain_fraction);
    threshold_out = qf.threshold;
    for (std::size_t i = 0; i < members.size(); ++i) {
      report.entries[members[i]].density = qf.densities[i];
      report.entries[members[i]].kept = false;
    }
    for (auto i : qf.retained) report.entries[members[i]].kept = true;
  };

  if (config.adaptive) {
    std::vector<std::size_t> easy, hard;
    for (std::size_t i = 0; i < n; ++i)
      (minor_groups[i] == PseudoLabel::HardMinor ? hard : easy).push_back(i);
    apply(easy, config.easy_retain, config.easy_density_threshold, report.easy_threshold);
    apply(hard, config.hard_retain, config.hard_density_threshold, report.hard_threshold);
  } else {
    std::vector<std::size_t> everyone(n);
    std::iota(everyone.begin(), everyone.end(), 0);
    apply(everyone, config.pooled_retain, config.easy_density_threshold, report.easy_threshold);
    report.hard_threshold = report.easy_threshold;
  }
  return report;
}

namespace {

std::size_t oversample_target(double rho, std::size_t n_major) {
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be > 0");
  return static_cast<std::size_t>(std::ceil(rho * static_cast<double>(n_major) - 1e-9));
}

// Keeps originals flagged true (in input order), then appends synthetics as
// minor-labeled rows.
AugmentResult assemble(const LabeledDataset& data, const std::vector<bool>& keep,
                       const FeatureMatrix& synthetic) {
  AugmentResult res;
  std::vector<std::size_t> kept_rows;
  for (std::size_t i = 0; i < data.size(); ++i)
    if (keep[i]) kept_rows.push_back(i);
  res.augmented = data.select(kept_rows);
  res.provenance.assign(kept_rows.size(), "original");
  for (std::size_t s = 0; s < synthetic.rows; ++s) {
    res.augmented.push_row(synthetic.row(s), ClassLabel::Minor);
    res.provenance.push_back("synthetic");
  }
  res.n_synthetic = synthetic.rows;
  res.n_dropped = data.size() - kept_rows.size();
  return res;
}

FeatureMatrix gather_rows(const FeatureMatrix& m, const std::vector<std::size_t>& rows) {
  FeatureMatrix out(0, m.cols);
  for (auto r : rows) out.append_row(m.row(r));
  return out;
}

// Shared state for the latent-space strategies.
struct LatentPipeline {
  std::size_t n_classes = 0;
  std::vector<int> targets;                     // class id per row
  std::vector<PseudoLabel> pseudo_labels;       // per row (2-class mode: no stars)
  std::vector<std::vector<double>> probs;       // frozen classifier outputs per row
  CvaeModel model;
  FeatureMatrix latents;                        // n x h mean embeddings
};

LatentPipeline run_latent_pipeline(const LabeledDataset& data, const OversampleConfig& cfg,
                                   RngStream& rng) {
  LatentPipeline p;
  const std::size_t n = data.size();
  const bool four_class = cfg.filter.segment;
  p.n_classes = four_class ? 4 : 2;

  p.targets.resize(n);
  p.pseudo_labels.resize(n);
  if (four_class) {
    const DifficultyGroups groups = relabel_by_difficulty(data, cfg.k_knn);
    p.pseudo_labels = groups.pseudo_labels;
    for (std::size_t i = 0; i < n; ++i) p.targets[i] = static_cast<int>(p.pseudo_labels[i]);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const bool minor = data.labels[i] == ClassLabel::Minor;
      p.targets[i] = minor ? 1 : 0;
      p.pseudo_labels[i] = minor ? PseudoLabel::EasyMinor : PseudoLabel::EasyMajor;
    }
  }

  std::shared_ptr<const PseudoClassifier> classifier;
  RngStream classifier_rng = rng.split(11);
  if (cfg.mlp_classifier) {
    MlpTrainConfig mlp;
    classifier = fit_mlp_classifier(data.features, p.targets, static_cast<int>(p.n_classes), mlp,
                                    classifier_rng);
  } else {
    ForestSpec spec;
    spec.n_trees = cfg.forest_trees;
    spec.tree.max_depth = -1;
    spec.tree.min_leaf = 1;
    classifier = std::make_shared<ForestPseudoClassifier>(RandomForest::fit(
        data.features, p.targets, static_cast<int>(p.n_classes), spec, classifier_rng));
  }

  p.probs.resize(n);
  for (std::size_t i = 0; i < n; ++i) p.probs[i] = classifier->predict_proba(data.features.row(i));

  std::vector<double> class_weights(p.n_classes, 0.0);
  for (int t : p.targets) class_weights[static_cast<std::size_t>(t)] += 1.0;
  for (auto& w : class_weights) w /= static_cast<double>(n);

  const std::size_t h = cfg.latent_dim == 0 ? auto_latent_dim(data.dim()) : cfg.latent_dim;
  const GmmPrior prior = make_prior(h, four_class, cfg.filter.disentangle, cfg.prior_preset,
                                    class_weights, cfg.prior_variance);

  RngStream init_rng = rng.split(12);
  p.model = CvaeModel(data.dim(), h, prior, classifier, init_rng);
  RngStream train_rng = rng.split(13);
  train_cvae(p.model, data.features, p.probs, cfg.train, train_rng);

  p.latents = FeatureMatrix(0, h);
  for (std::size_t i = 0; i < n; ++i)
    p.latents.append_row(p.model.embed_with_proba(data.features.row(i), p.probs[i]).z);
  return p;
}

LatentView make_latent_view(const LabeledDataset& data, const LatentPipeline& p,
                            const FilterReport* report) {
  LatentView view;
  view.latent_dim = p.latents.cols;
  view.z = p.latents;
  view.labels = data.labels;
  view.pseudo_labels = p.pseudo_labels;
  view.density.assign(data.size(), kNan);
  view.kept.assign(data.size(), 1);
  if (report != nullptr) {
    for (const auto& e : report->entries) {
      view.density[e.row] = e.density;
      view.kept[e.row] = e.kept ? 1 : 0;
    }
  }
  return view;
}

FilterReport plain_report(const std::vector<std::size_t>& minor_rows,
                          const std::vector<PseudoLabel>& pseudo,
                          const std::vector<std::size_t>& kept_minor_rows) {
  FilterReport report;
  report.easy_threshold = kNan;
  report.hard_threshold = kNan;
  std::vector<bool> kept_lookup;
  if (!minor_rows.empty()) kept_lookup.assign(*std::max_element(minor_rows.begin(), minor_rows.end()) + 1, false);
  for (auto r : kept_minor_rows) kept_lookup[r] = true;
  for (auto r : minor_rows)
    report.entries.push_back({r, pseudo[r], kNan, kept_lookup[r]});
  return report;
}

}  // namespace

AugmentResult augment(const LabeledDataset& data, const OversampleConfig& cfg, RngStream& rng) {
  const std::size_t n_major = data.count(ClassLabel::Major);
  const std::size_t n_minor = data.count(ClassLabel::Minor);
  if (n_major == 0 || n_minor == 0)
    throw std::invalid_argument("augment: both classes must be present");

  const std::size_t target = oversample_target(cfg.rho, n_major);
  const std::vector<std::size_t> minor_rows = data.indices_of(ClassLabel::Minor);
  const std::vector<bool> keep_all(data.size(), true);
  RngStream smote_rng = rng.split(21);

  switch (cfg.strategy) {
    case Strategy::Smote: {
      const std::size_t need = target > n_minor ? target - n_minor : 0;
      const FeatureMatrix synth =
          smote_synthesize(gather_rows(data.features, minor_rows), need, cfg.k_smote, smote_rng);
      return assemble(data, keep_all, synth);
    }

    case Strategy::BorderlineSmote: {
      const std::size_t need = target > n_minor ? target - n_minor : 0;
      FeatureMatrix synth(0, data.dim());
      if (need > 0) {
        const std::vector<std::size_t> danger = borderline_danger(data, cfg.k_knn);
        if (danger.empty()) throw std::runtime_error("bsmote: no borderline minority samples");
        // seeds are danger rows; neighbors come from the full minority set
        std::vector<std::size_t> seed_pos;
        std::vector<std::size_t> minor_pos(data.size(), data.size());
        for (std::size_t i = 0; i < minor_rows.size(); ++i) minor_pos[minor_rows[i]] = i;
        for (auto d : danger) seed_pos.push_back(minor_pos[d]);
        synth = smote_synthesize(gather_rows(data.features, minor_rows), need, cfg.k_smote,
                                 smote_rng, &seed_pos);
      }
      return assemble(data, keep_all, synth);
    }

    case Strategy::SmoteEnn: {
      OversampleConfig plain = cfg;
      plain.strategy = Strategy::Smote;
      AugmentResult smoted = augment(data, plain, rng);
      const std::vector<std::size_t> retained = enn_retained(smoted.augmented, cfg.k_enn);
      AugmentResult res;
      res.augmented = smoted.augmented.select(retained);
      for (auto r : retained) res.provenance.push_back(smoted.provenance[r]);
      res.n_synthetic = 0;
      for (const auto& tag : res.provenance)
        if (tag == "synthetic") ++res.n_synthetic;
      res.n_dropped = data.size() - (res.augmented.size() - res.n_synthetic);
      return res;
    }

    case Strategy::KMeansSmote: {
      const std::size_t need = target > n_minor ? target - n_minor : 0;
      FeatureMatrix synth(0, data.dim());
      if (need > 0) {
        const std::size_t k = std::min(cfg.kmeans_clusters, data.size());
        RngStream km_rng = rng.split(22);
        const KMeansResult km = kmeans(data.features, k, km_rng);
        struct Cluster {
          std::vector<std::size_t> minors;
          std::size_t total = 0;
        };
        std::vector<Cluster> clusters(k);
        for (std::size_t i = 0; i < data.size(); ++i) {
          ++clusters[km.assignment[i]].total;
          if (data.labels[i] == ClassLabel::Minor) clusters[km.assignment[i]].minors.push_back(i);
        }
        std::vector<std::size_t> eligible;
        std::size_t eligible_minors = 0;
        for (std::size_t c = 0; c < k; ++c) {
          const auto& cl = clusters[c];
          if (cl.minors.size() < 2) continue;
          const double frac =
              static_cast<double>(cl.minors.size()) / static_cast<double>(cl.total);
          if (frac > cfg.kmeans_minority_threshold) {
            eligible.push_back(c);
            eligible_minors += cl.minors.size();
          }
        }
        if (eligible.empty()) throw std::runtime_error("kmsmote: no eligible cluster");

        // largest-remainder allocation proportional to cluster minority counts
        std::vector<std::size_t> alloc(eligible.size(), 0);
        std::vector<std::pair<double, std::size_t>> remainders;
        std::size_t assigned = 0;
        for (std::size_t e = 0; e < eligible.size(); ++e) {
          const double share = static_cast<double>(need) *
                               static_cast<double>(clusters[eligible[e]].minors.size()) /
                               static_cast<double>(eligible_minors);
          alloc[e] = static_cast<std::size_t>(std::floor(share));
          assigned += alloc[e];
          remainders.push_back({share - std::floor(share), e});
        }
        std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
          if (a.first != b.first) return a.first > b.first;
          return a.second < b.second;
        });
        for (std::size_t i = 0; assigned < need; ++i, ++assigned)
          ++alloc[remainders[i % remainders.size()].second];

        for (std::size_t e = 0; e < eligible.size(); ++e) {
          if (alloc[e] == 0) continue;
          RngStream cluster_rng = smote_rng.split(eligible[e]);
          const FeatureMatrix members = gather_rows(data.features, clusters[eligible[e]].minors);
          const FeatureMatrix part = smote_synthesize(members, alloc[e], cfg.k_smote, cluster_rng);
          for (std::size_t s = 0; s < part.rows; ++s) synth.append_row(part.row(s));
        }
      }
      return assemble(data, keep_all, synth);
    }

    case Strategy::SmoteCls:
    case Strategy::DfbsFilterSmote:
    case Strategy::DdhsFilterSmote:
    case Strategy::LatentSmoteDecode:
    case Strategy::CvaeGenerate:
      break;  // handled below
  }

  // Latent-space strategies share the trained model.
  const LatentPipeline pipeline = run_latent_pipeline(data, cfg, rng);
  const FeatureMatrix minor_latents = gather_rows(pipeline.latents, minor_rows);

  if (cfg.strategy == Strategy::SmoteCls) {
    std::vector<PseudoLabel> minor_groups;
    for (auto r : minor_rows) minor_groups.push_back(pipeline.pseudo_labels[r]);
    FilterReport report =
        group_adaptive_filter(minor_latents, minor_rows, minor_groups, cfg.filter);

    std::vector<std::size_t> kept_minor_rows;
    for (const auto& e : report.entries)
      if (e.kept) kept_minor_rows.push_back(e.row);
    std::sort(kept_minor_rows.begin(), kept_minor_rows.end());

    const std::size_t need =
        target > kept_minor_rows.size() ? target - kept_minor_rows.size() : 0;
    if (need > 0 && kept_minor_rows.size() < 2)
      throw std::runtime_error(
          "smote_cls: filtering removed too much; lower the retain fractions or disable "
          "filtering");
    const FeatureMatrix synth =
        smote_synthesize(gather_rows(data.features, kept_minor_rows), need, cfg.k_smote, smote_rng);

    std::vector<bool> keep(data.size(), false);
    for (std::size_t i = 0; i < data.size(); ++i) keep[i] = data.labels[i] == ClassLabel::Major;
    for (auto r : kept_minor_rows) keep[r] = true;

    AugmentResult res = assemble(data, keep, synth);
    res.latent = make_latent_view(data, pipeline, &report);
    res.filter = std::move(report);
    return res;
  }

  if (cfg.strategy == Strategy::DfbsFilterSmote || cfg.strategy == Strategy::DdhsFilterSmote) {
    std::vector<std::size_t> kept_minor_rows;
    if (cfg.strategy == Strategy::DfbsFilterSmote) {
      kept_minor_rows = dfbs_retained(pipeline.latents, data.labels);
    } else {
      for (auto pos : ddhs_retained(minor_latents, cfg.ddhs_retain))
        kept_minor_rows.push_back(minor_rows[pos]);
    }
    std::sort(kept_minor_rows.begin(), kept_minor_rows.end());
    FilterReport report = plain_report(minor_rows, pipeline.pseudo_labels, kept_minor_rows);

    const std::size_t need =
        target > kept_minor_rows.size() ? target - kept_minor_rows.size() : 0;
    if (need > 0 && kept_minor_rows.size() < 2)
      throw std::runtime_error(std::string(strategy_name(cfg.strategy)) +
                               ": filtering removed too much");
    const FeatureMatrix synth =
        smote_synthesize(gather_rows(data.features, kept_minor_rows), need, cfg.k_smote, smote_rng);

    std::vector<bool> keep(data.size(), false);
    for (std::size_t i = 0; i < data.size(); ++i) keep[i] = data.labels[i] == ClassLabel::Major;
    for (auto r : kept_minor_rows) keep[r] = true;

    AugmentResult res = assemble(data, keep, synth);
    res.latent = make_latent_view(data, pipeline, &report);
    res.filter = std::move(report);
    return res;
  }

  if (cfg.strategy == Strategy::LatentSmoteDecode) {
    const std::size_t need = target > n_minor ? target - n_minor : 0;
    const FeatureMatrix synth_z = smote_synthesize(minor_latents, need, cfg.k_smote, smote_rng);
    FeatureMatrix synth(0, data.dim());
    for (std::size_t s = 0; s < synth_z.rows; ++s) {
      const std::vector<double> x = pipeline.model.decode(synth_z.row(s));
      synth.append_row(x);
    }
    AugmentResult res = assemble(data, keep_all, synth);
    res.latent = make_latent_view(data, pipeline, nullptr);
    return res;
  }

  // Strategy::CvaeGenerate
  const std::size_t need = target > n_minor ? target - n_minor : 0;
  std::vector<std::size_t> minor_classes;
  if (cfg.filter.segment)
    minor_classes = {static_cast<std::size_t>(PseudoLabel::EasyMinor),
                     static_cast<std::size_t>(PseudoLabel::HardMinor)};
  else
    minor_classes = {1};
  const GmmPrior& prior = pipeline.model.prior();
  double weight_sum = 0.0;
  for (auto c : minor_classes) weight_sum += prior.weights[c];
  FeatureMatrix synth(0, data.dim());
  for (std::size_t s = 0; s < need; ++s) {
    const double u = smote_rng.next_double() * weight_sum;
    std::size_t pick = minor_classes.back();
    double acc = 0.0;
    for (auto c : minor_classes) {
      acc += prior.weights[c];
      if (u < acc) {
        pick = c;
        break;
      }
    }
    std::vector<double> z(prior.latent_dim);
    const double sd = std::sqrt(prior.variances[pick]);
    for (std::size_t j = 0; j < z.size(); ++j)
      z[j] = prior.means[pick][j] + sd * smote_rng.next_gaussian();
    synth.append_row(pipeline.model.decode(z));
  }
  AugmentResult res = assemble(data, keep_all, synth);
  res.latent = make_latent_view(data, pipeline, nullptr);
  return res;
}

}  // namespace smotecls
