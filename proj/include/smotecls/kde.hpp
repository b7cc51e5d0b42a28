#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "smotecls/dataset.hpp"

namespace smotecls {

// Per-dimension Scott's-rule bandwidth: sample std dev times m^(-1/(h+4)),
// floored at 1e-6.
std::vector<double> scott_bandwidth(const FeatureMatrix& points);

// Gaussian product-kernel density over a fixed support set with diagonal
// bandwidth. Query points that belong to the support contribute their own
// kernel (no leave-one-out).
class KernelDensity {
 public:
  static constexpr double kBandwidthFloor = 1e-6;

  static KernelDensity fit(FeatureMatrix points);  // Scott's-rule bandwidths
  static KernelDensity fit_with_bandwidth(FeatureMatrix points, std::vector<double> bandwidth);

  double density_at(std::span<const double> z) const;
  const std::vector<double>& bandwidth() const { return bandwidth_; }
  const FeatureMatrix& support() const { return support_; }

 private:
  KernelDensity(FeatureMatrix points, std::vector<double> bandwidth);
  FeatureMatrix support_;
  std::vector<double> bandwidth_;
  double log_norm_ = 0.0;  // -(h/2) log(2 pi) - sum_j log(b_j)
};

struct QuantileFilter {
  std::vector<std::size_t> retained;  // indices into the evaluated points
  double threshold;                   // density cut; -inf when fraction == 1
  std::vector<double> densities;      // per evaluated point
};

// Keeps the points whose density exceeds the (1 - retain_fraction) quantile
// of the points' own densities (lower interpolation, strict comparison).
QuantileFilter retain_by_quantile(const KernelDensity& model, const FeatureMatrix& points,
                                  double retain_fraction);

}  // namespace smotecls
