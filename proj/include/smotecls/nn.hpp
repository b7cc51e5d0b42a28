#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "smotecls/rng.hpp"

namespace smotecls {

enum class Activation : std::uint8_t { Linear = 0, Relu = 1, Softmax = 2 };

struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  Activation activation = Activation::Linear;
  std::vector<double> weights;  // out x in, row-major
  std::vector<double> bias;     // out
};

// Plain fully connected network. Parameters flatten layer-major: for each
// layer, weights then bias.
struct DenseNet {
  std::vector<DenseLayer> layers;

  static DenseNet make(const std::vector<std::size_t>& widths,
                       const std::vector<Activation>& activations, RngStream& rng);

  std::size_t input_dim() const { return layers.front().in; }
  std::size_t output_dim() const { return layers.back().out; }
  std::size_t param_count() const;
  void get_params(std::span<double> out) const;
  void set_params(std::span<const double> in);

  void save(std::ostream& out) const;
  static DenseNet load(std::istream& in);
};

// Post-activation outputs per layer; slot 0 holds the input.
struct ForwardCache {
  std::vector<std::vector<double>> post;
};

std::vector<double> nn_forward(const DenseNet& net, std::span<const double> input,
                               ForwardCache* cache = nullptr);

// upstream is dL/d(output). Adds parameter gradients into param_grads
// (flattened as in get_params) and returns dL/d(input).
std::vector<double> nn_backward(const DenseNet& net, const ForwardCache& cache,
                                std::span<const double> upstream, std::span<double> param_grads);

enum class OptMethod : std::uint8_t { Sgd = 0, Adam = 1 };

// First-order optimizer over a flat parameter vector. The Adam variant uses
// decay rates 0.9/0.999 and epsilon 1e-8 with bias correction.
class Optimizer {
 public:
  Optimizer(OptMethod method, double learning_rate, std::size_t param_count);

  // Throws on non-finite gradients, reporting the offending index.
  void step(std::span<double> params, std::span<const double> grads);

  std::size_t step_count() const { return steps_; }

 private:
  OptMethod method_;
  double lr_;
  std::size_t steps_ = 0;
  std::vector<double> m_, v_;
};

}  // namespace smotecls
