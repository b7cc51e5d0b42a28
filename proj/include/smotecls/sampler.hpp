#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "smotecls/cvae.hpp"
#include "smotecls/dataset.hpp"
#include "smotecls/kde.hpp"
#include "smotecls/neighbors.hpp"
#include "smotecls/rng.hpp"

namespace smotecls {

enum class Strategy : std::uint8_t {
  Smote = 0,
  BorderlineSmote = 1,
  SmoteEnn = 2,
  KMeansSmote = 3,
  SmoteCls = 4,
  DfbsFilterSmote = 5,    // latent centroid-distance filter, then data-space SMOTE
  DdhsFilterSmote = 6,    // pooled latent density filter, then data-space SMOTE
  LatentSmoteDecode = 7,  // SMOTE among minor latents, decoded back
  CvaeGenerate = 8,       // decode draws from the minor prior components
};

Strategy strategy_from_name(const std::string& name);
const char* strategy_name(Strategy s);
std::vector<std::string> known_strategy_names();

struct FilterConfig {
  double easy_retain = 0.9;    // density-quantile fraction kept in the easy-minor group
  double hard_retain = 0.6;    // density-quantile fraction kept in the hard-minor group
  double pooled_retain = 0.6;  // fraction kept when filtering all minors with one KDE
  // Raw density cuts overriding the quantile rule (expert use).
  std::optional<double> easy_density_threshold;
  std::optional<double> hard_density_threshold;
  // Ablation switches.
  bool disentangle = true;  // fixed separated prior means vs a standard-normal prior
  bool segment = true;      // four difficulty classes vs plain class labels
  bool adaptive = true;     // per-group KDEs vs one pooled minor KDE
};

struct OversampleConfig {
  Strategy strategy = Strategy::Smote;
  double rho = 1.0;          // target minor-to-major ratio
  std::size_t k_smote = 5;   // SMOTE neighbor count
  std::size_t k_knn = 5;     // difficulty-relabeling neighbor count
  std::size_t k_enn = 3;     // edited-nearest-neighbor cleaning count
  FilterConfig filter;
  CvaeTrainConfig train;
  std::size_t latent_dim = 0;  // 0: auto rule (4 when d > 90, else 2)
  bool mlp_classifier = false;  // pseudo-label classifier: MLP instead of forest
  PriorPreset prior_preset = PriorPreset::Default;
  double prior_variance = 0.1;
  std::size_t forest_trees = 200;  // pseudo-label forest size
  std::size_t kmeans_clusters = 8;
  double kmeans_minority_threshold = 0.5;
  double ddhs_retain = 0.75;
};

// Applies per-strategy defaults (including the Table-style ablation aliases
// smote_cls_no_dis / smote_cls_no_seg / smote_cls_no_af) on top of a template.
OversampleConfig config_for_strategy(const std::string& name, OversampleConfig base);

struct FilterReport {
  struct Entry {
    std::size_t row;       // index into the input dataset
    PseudoLabel group;
    double density;        // NaN for filters without a density notion
    bool kept;
  };
  std::vector<Entry> entries;  // one per minor row
  double easy_threshold = 0.0;
  double hard_threshold = 0.0;
  std::size_t kept_count() const;
};

// Latent-space view of every input row, for export and threshold tuning.
struct LatentView {
  std::size_t latent_dim = 0;
  FeatureMatrix z;                    // n x h
  std::vector<ClassLabel> labels;
  std::vector<PseudoLabel> pseudo_labels;
  std::vector<double> density;        // NaN where no density was evaluated
  std::vector<std::uint8_t> kept;     // 1 = kept (majors are always 1)
};

struct AugmentResult {
  LabeledDataset augmented;               // same feature space as the input
  std::vector<std::string> provenance;    // "original" | "synthetic" per row
  std::size_t n_synthetic = 0;
  std::size_t n_dropped = 0;              // original rows removed by filtering or cleaning
  std::optional<FilterReport> filter;
  std::optional<LatentView> latent;
};

// x + u * (nn - x), elementwise.
std::vector<double> smote_interpolate(std::span<const double> x, std::span<const double> nn,
                                      double u);

// Draws `target` synthetics by interpolating seeds against their nearest
// candidates. Seeds defaults to all candidates. Neighbor lists are computed
// once among the original candidates.
FeatureMatrix smote_synthesize(const FeatureMatrix& candidates, std::size_t target,
                               std::size_t k, RngStream& rng,
                               const std::vector<std::size_t>* seeds = nullptr);

// Borderline-1 rule: minor rows whose k-neighborhood is majority-major but
// not entirely major.
std::vector<std::size_t> borderline_danger(const LabeledDataset& data, std::size_t k);

// Minor indices whose latent point sits closer to the minor centroid than to
// the major centroid (strict).
std::vector<std::size_t> dfbs_retained(const FeatureMatrix& latents,
                                       const std::vector<ClassLabel>& labels);

// Top retain_fraction of minors by pooled latent density.
std::vector<std::size_t> ddhs_retained(const FeatureMatrix& minor_latents, double retain_fraction);

// Per-group KDE filter over minor latents. minor_rows gives each latent row's
// index in the parent dataset; groups are the Eq-style pseudo labels.
FilterReport group_adaptive_filter(const FeatureMatrix& minor_latents,
                                   const std::vector<std::size_t>& minor_rows,
                                   const std::vector<PseudoLabel>& minor_groups,
                                   const FilterConfig& config);

// Runs one oversampling strategy on standardized data.
AugmentResult augment(const LabeledDataset& data, const OversampleConfig& config, RngStream& rng);

}  // namespace smotecls
