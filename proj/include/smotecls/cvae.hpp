#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "smotecls/dataset.hpp"
#include "smotecls/nn.hpp"
#include "smotecls/rng.hpp"
#include "smotecls/tree.hpp"

namespace smotecls {

// Fixed Gaussian-mixture latent prior: one spherical component per pseudo
// class, component weights taken from the empirical pseudo-label frequencies.
struct GmmPrior {
  std::size_t latent_dim = 0;
  std::vector<std::vector<double>> means;  // per class, length latent_dim
  std::vector<double> variances;           // per class, scalar (isotropic)
  std::vector<double> weights;             // p(class), sums to 1

  std::size_t n_classes() const { return means.size(); }
  void validate() const;
  void save(std::ostream& out) const;
  static GmmPrior load(std::istream& in);
};

// Named placements for the component means (first two latent dimensions;
// higher dimensions repeat the pattern).
enum class PriorPreset : std::uint8_t {
  Default = 0,  // major (-1,1), minor (1,-1), hard-major (1,1), hard-minor (-1,-1)
  Wide = 1,     // within-class distance stretched beyond the between-class distance
  Axes = 2,     // x axis encodes difficulty, y axis encodes class
  Merged = 3,   // hard and easy of each class share a mean
};
PriorPreset prior_preset_from_name(const std::string& name);
const char* prior_preset_name(PriorPreset p);

// four_class=false collapses to one component per class label.
// disentangle=false places every component at the origin with unit variance.
GmmPrior make_prior(std::size_t latent_dim, bool four_class, bool disentangle, PriorPreset preset,
                    const std::vector<double>& class_weights, double variance = 0.1);

// Frozen pseudo-label classifier feeding the mixture weights.
class PseudoClassifier {
 public:
  virtual ~PseudoClassifier() = default;
  virtual std::size_t n_classes() const = 0;
  virtual std::vector<double> predict_proba(std::span<const double> x) const = 0;
  virtual void save(std::ostream& out) const = 0;
};

class ForestPseudoClassifier final : public PseudoClassifier {
 public:
  explicit ForestPseudoClassifier(RandomForest forest) : forest_(std::move(forest)) {}
  std::size_t n_classes() const override { return static_cast<std::size_t>(forest_.n_classes()); }
  std::vector<double> predict_proba(std::span<const double> x) const override {
    return forest_.predict_proba(x);
  }
  void save(std::ostream& out) const override;
  const RandomForest& forest() const { return forest_; }

 private:
  RandomForest forest_;
};

class MlpPseudoClassifier final : public PseudoClassifier {
 public:
  explicit MlpPseudoClassifier(DenseNet net) : net_(std::move(net)) {}
  std::size_t n_classes() const override { return net_.output_dim(); }
  std::vector<double> predict_proba(std::span<const double> x) const override {
    return nn_forward(net_, x);
  }
  void save(std::ostream& out) const override;
  const DenseNet& net() const { return net_; }

 private:
  DenseNet net_;
};

std::unique_ptr<PseudoClassifier> load_pseudo_classifier(std::istream& in);

// Cross-entropy-trained MLP alternative to the forest classifier.
struct MlpTrainConfig {
  std::vector<std::size_t> hidden = {32, 32};
  double learning_rate = 1e-3;
  std::size_t epochs = 200;
  std::size_t batch = 64;
};
std::unique_ptr<PseudoClassifier> fit_mlp_classifier(const FeatureMatrix& X,
                                                     const std::vector<int>& y, int n_classes,
                                                     const MlpTrainConfig& config, RngStream& rng);

// KL(N(mu_q, diag(var_q)) || N(mu_p, diag(var_p))) for diagonal Gaussians.
double gaussian_kl(std::span<const double> mu_q, std::span<const double> var_q,
                   std::span<const double> mu_p, std::span<const double> var_p);

// Encoder with one trunk and per-class Gaussian heads, plus a decoder.
// Encoder widths (8h, 4h, 2h), decoder widths (2h, 4h, 8h) around latent h.
class CvaeModel {
 public:
  CvaeModel() = default;
  CvaeModel(std::size_t input_dim, std::size_t latent_dim, GmmPrior prior,
            std::shared_ptr<const PseudoClassifier> classifier, RngStream& rng);

  std::size_t input_dim() const { return input_dim_; }
  std::size_t latent_dim() const { return latent_dim_; }
  std::size_t n_classes() const { return prior_.n_classes(); }
  const GmmPrior& prior() const { return prior_; }
  const PseudoClassifier& classifier() const { return *classifier_; }

  struct Encoded {
    std::vector<double> means;     // n_classes x latent_dim, class-major
    std::vector<double> log_vars;  // n_classes x latent_dim
    std::span<const double> mean_of(std::size_t c, std::size_t h) const {
      return {means.data() + c * h, h};
    }
  };
  Encoded encode(std::span<const double> x) const;

  std::vector<double> classifier_proba(std::span<const double> x) const {
    return classifier_->predict_proba(x);
  }

  // Mixture-to-mixture KL upper bound: weighted per-component Gaussian KLs
  // plus the categorical KL of the classifier weights against the prior.
  double kl_upper_bound(const Encoded& enc, std::span<const double> weights) const;

  struct Embedding {
    std::vector<double> z;
    std::size_t component;
  };
  // Deterministic mean embedding under the argmax classifier component.
  Embedding embed(std::span<const double> x) const;
  Embedding embed_with_proba(std::span<const double> x, std::span<const double> proba) const;

  // Ancestral draw: component from the classifier weights, then a
  // reparameterized Gaussian sample from that head.
  std::vector<double> sample_posterior(std::span<const double> x, RngStream& rng) const;

  std::vector<double> decode(std::span<const double> z) const;

  // Parameter access across (trunk, mean heads, log-var heads, decoder).
  std::size_t param_count() const;
  void get_params(std::span<double> out) const;
  void set_params(std::span<const double> in);

  void save(std::ostream& out) const;
  static CvaeModel load(std::istream& in);

  // Internals used by the training loop.
  const DenseNet& trunk() const { return trunk_; }
  const DenseNet& decoder() const { return decoder_; }

  friend struct CvaeLossEval;

 private:
  std::size_t input_dim_ = 0;
  std::size_t latent_dim_ = 0;
  DenseNet trunk_;         // d -> 8h -> 4h -> 2h, relu
  DenseNet mean_heads_;    // 2h -> C*h, linear
  DenseNet logvar_heads_;  // 2h -> C*h, linear
  DenseNet decoder_;       // h -> 2h -> 4h -> 8h -> d, relu then linear
  GmmPrior prior_;
  std::shared_ptr<const PseudoClassifier> classifier_;
};

struct CvaeTrainConfig {
  double beta = 1.0;
  double learning_rate = 1e-3;
  std::size_t epochs = 300;
  std::size_t batch = 64;
  OptMethod optimizer = OptMethod::Adam;
};

// Component picks and Gaussian noise for one batch, fixed ahead of the loss
// evaluation so the objective is a deterministic function of the parameters.
struct BatchDraws {
  std::vector<std::size_t> component;  // per row
  std::vector<double> eps;             // per row, latent_dim each
};
BatchDraws draw_batch(const CvaeModel& model, std::span<const std::size_t> rows,
                      const std::vector<std::vector<double>>& class_probs, RngStream& rng);

// Mean over the batch of L1 reconstruction plus beta times the KL upper
// bound. Fills param_grads (same layout as get_params) when non-null.
double cvae_loss(const CvaeModel& model, const FeatureMatrix& X,
                 std::span<const std::size_t> rows,
                 const std::vector<std::vector<double>>& class_probs, const BatchDraws& draws,
                 double beta, std::span<double> param_grads);

struct TrainTrace {
  std::vector<double> epoch_loss;
};

// Minibatch training per the configured optimizer. class_probs are the
// frozen classifier outputs for every row of X, precomputed by the caller.
TrainTrace train_cvae(CvaeModel& model, const FeatureMatrix& X,
                      const std::vector<std::vector<double>>& class_probs,
                      const CvaeTrainConfig& config, RngStream& rng);

// Latent dimension rule: 4 when the feature count exceeds 90, else 2.
std::size_t auto_latent_dim(std::size_t n_features);

}  // namespace smotecls
