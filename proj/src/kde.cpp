#include "smotecls/kde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace smotecls {

std::vector<double> scott_bandwidth(const FeatureMatrix& points) {
  const std::size_t m = points.rows, h = points.cols;
  if (m < 2) throw std::invalid_argument("scott_bandwidth: need at least 2 points");
  const double factor = std::pow(static_cast<double>(m), -1.0 / (static_cast<double>(h) + 4.0));
  std::vector<double> bw(h);
  for (std::size_t j = 0; j < h; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) mean += points.at(i, j);
    mean /= static_cast<double>(m);
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = points.at(i, j) - mean;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(m - 1));  // sample std dev
    bw[j] = std::max(sd * factor, KernelDensity::kBandwidthFloor);
  }
  return bw;
}

KernelDensity::KernelDensity(FeatureMatrix points, std::vector<double> bandwidth)
    : support_(std::move(points)), bandwidth_(std::move(bandwidth)) {
  if (support_.rows < 1) throw std::invalid_argument("KernelDensity: empty support");
  if (bandwidth_.size() != support_.cols)
    throw std::invalid_argument("KernelDensity: bandwidth length mismatch");
  log_norm_ = -0.5 * static_cast<double>(support_.cols) * std::log(2.0 * M_PI);
  for (double b : bandwidth_) {
    if (!(b > 0.0)) throw std::invalid_argument("KernelDensity: bandwidth must be positive");
    log_norm_ -= std::log(b);
  }
}

KernelDensity KernelDensity::fit(FeatureMatrix points) {
  std::vector<double> bw = scott_bandwidth(points);
  return KernelDensity(std::move(points), std::move(bw));
}

KernelDensity KernelDensity::fit_with_bandwidth(FeatureMatrix points, std::vector<double> bandwidth) {
  for (double& b : bandwidth) b = std::max(b, kBandwidthFloor);
  return KernelDensity(std::move(points), std::move(bandwidth));
}

double KernelDensity::density_at(std::span<const double> z) const {
  if (z.size() != support_.cols) throw std::invalid_argument("density_at: dimension mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < support_.rows; ++i) {
    double q = 0.0;
    for (std::size_t j = 0; j < support_.cols; ++j) {
      const double t = (z[j] - support_.at(i, j)) / bandwidth_[j];
      q += t * t;
    }
    sum += std::exp(log_norm_ - 0.5 * q);
  }
  return sum / static_cast<double>(support_.rows);
}

QuantileFilter retain_by_quantile(const KernelDensity& model, const FeatureMatrix& points,
                                  double retain_fraction) {
  if (points.rows == 0) throw std::invalid_argument("retain_by_quantile: empty point set");
  if (!(retain_fraction > 0.0 && retain_fraction <= 1.0))
    throw std::invalid_argument("retain_by_quantile: fraction must be in (0, 1]");

  QuantileFilter out;
  out.densities.resize(points.rows);
  for (std::size_t i = 0; i < points.rows; ++i) out.densities[i] = model.density_at(points.row(i));

  if (retain_fraction == 1.0) {
    out.threshold = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.rows; ++i) out.retained.push_back(i);
    return out;
  }

  std::vector<double> sorted = out.densities;
  std::sort(sorted.begin(), sorted.end());
  // lower-interpolation quantile at probability (1 - retain_fraction)
  const double pos = (1.0 - retain_fraction) * static_cast<double>(sorted.size() - 1);
  out.threshold = sorted[static_cast<std::size_t>(std::floor(pos))];
  for (std::size_t i = 0; i < points.rows; ++i)
    if (out.densities[i] > out.threshold) out.retained.push_back(i);
  return out;
}

}  // namespace smotecls
