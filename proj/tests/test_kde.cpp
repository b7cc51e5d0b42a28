#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "smotecls/kde.hpp"
#include "smotecls/rng.hpp"

using namespace smotecls;

namespace {

FeatureMatrix random_cloud(std::size_t n, std::size_t d, RngStream& rng) {
  FeatureMatrix m(n, d);
  for (auto& v : m.values) v = rng.next_gaussian() * 1.7 + 0.3;
  return m;
}

// scales each column to sample standard deviation exactly one
void normalize_sample_std(FeatureMatrix& m) {
  for (std::size_t j = 0; j < m.cols; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i) mean += m.at(i, j);
    mean /= static_cast<double>(m.rows);
    double ss = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i) ss += (m.at(i, j) - mean) * (m.at(i, j) - mean);
    const double sd = std::sqrt(ss / static_cast<double>(m.rows - 1));
    for (std::size_t i = 0; i < m.rows; ++i) m.at(i, j) = (m.at(i, j) - mean) / sd;
  }
}

}  // namespace

TEST_CASE("scott factor for m=100, h=2 on unit-variance dims") {
  RngStream rng(41, 0);
  FeatureMatrix pts = random_cloud(100, 2, rng);
  normalize_sample_std(pts);
  const auto bw = scott_bandwidth(pts);
  const double want = std::pow(100.0, -1.0 / 6.0);
  CHECK(want == doctest::Approx(0.46416).epsilon(1e-4));
  CHECK(bw[0] == doctest::Approx(want).epsilon(1e-12));
  CHECK(bw[1] == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("scott floors constant dimensions") {
  FeatureMatrix pts(50, 2);
  for (std::size_t i = 0; i < 50; ++i) {
    pts.at(i, 0) = 7.0;  // constant
    pts.at(i, 1) = static_cast<double>(i);
  }
  const auto bw = scott_bandwidth(pts);
  CHECK(bw[0] == KernelDensity::kBandwidthFloor);
  CHECK(bw[1] > 1.0);
}

TEST_CASE("scott matches an independent recomputation on a 50x4 cloud") {
  RngStream rng(42, 0);
  const FeatureMatrix pts = random_cloud(50, 4, rng);
  const auto bw = scott_bandwidth(pts);
  const double factor = std::pow(50.0, -1.0 / 8.0);
  for (std::size_t j = 0; j < 4; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < 50; ++i) mean += pts.at(i, j);
    mean /= 50.0;
    double ss = 0.0;
    for (std::size_t i = 0; i < 50; ++i) ss += (pts.at(i, j) - mean) * (pts.at(i, j) - mean);
    const double sd = std::sqrt(ss / 49.0);
    CHECK(bw[j] == sd * factor);  // same arithmetic, exact
  }
}

TEST_CASE("scott exponent under doubled support with fixed deviation") {
  RngStream rng(43, 0);
  FeatureMatrix small = random_cloud(60, 3, rng);
  FeatureMatrix big = random_cloud(120, 3, rng);
  normalize_sample_std(small);
  normalize_sample_std(big);
  const auto bw_small = scott_bandwidth(small);
  const auto bw_big = scott_bandwidth(big);
  const double want = std::pow(2.0, -1.0 / 7.0);
  for (std::size_t j = 0; j < 3; ++j)
    CHECK(bw_big[j] / bw_small[j] == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("single-point kernel peak is the gaussian mode") {
  FeatureMatrix pts(1, 1);
  pts.at(0, 0) = 2.5;
  const KernelDensity kde = KernelDensity::fit_with_bandwidth(pts, {1.0});
  const double q[1] = {2.5};
  CHECK(kde.density_at(q) == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-12));
}

TEST_CASE("density far from all support decays below 1e-30") {
  RngStream rng(44, 0);
  const FeatureMatrix pts = random_cloud(30, 2, rng);
  const KernelDensity kde = KernelDensity::fit(pts);
  const double q[2] = {1e3, -1e3};
  CHECK(kde.density_at(q) < 1e-30);
  CHECK(kde.density_at(q) >= 0.0);
}

TEST_CASE("density matches a naive double-loop oracle") {
  RngStream rng(45, 0);
  const FeatureMatrix pts = random_cloud(25, 3, rng);
  const KernelDensity kde = KernelDensity::fit(pts);
  const auto& bw = kde.bandwidth();
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> q(3);
    for (auto& v : q) v = rng.next_gaussian();
    double sum = 0.0;
    for (std::size_t i = 0; i < pts.rows; ++i) {
      double prod = 1.0;
      for (std::size_t j = 0; j < 3; ++j) {
        const double t = (q[j] - pts.at(i, j)) / bw[j];
        prod *= std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI * bw[j] * bw[j]);
      }
      sum += prod;
    }
    sum /= static_cast<double>(pts.rows);
    CHECK(kde.density_at(q) == doctest::Approx(sum).epsilon(1e-10));
  }
}

TEST_CASE("density is invariant to support permutation and strictly positive") {
  RngStream rng(46, 0);
  FeatureMatrix pts = random_cloud(20, 2, rng);
  const KernelDensity a = KernelDensity::fit(pts);
  FeatureMatrix reversed(0, 2);
  for (std::size_t i = pts.rows; i-- > 0;) reversed.append_row(pts.row(i));
  const KernelDensity b = KernelDensity::fit(reversed);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> q{rng.next_gaussian(), rng.next_gaussian()};
    CHECK(a.density_at(q) == doctest::Approx(b.density_at(q)).epsilon(1e-12));
    CHECK(a.density_at(q) > 0.0);
  }
}

TEST_CASE("retain_by_quantile keeps everything at fraction one") {
  RngStream rng(47, 0);
  const FeatureMatrix pts = random_cloud(12, 2, rng);
  const KernelDensity kde = KernelDensity::fit(pts);
  const QuantileFilter f = retain_by_quantile(kde, pts, 1.0);
  CHECK(f.retained.size() == 12);
  CHECK(std::isinf(f.threshold));
  CHECK(f.threshold < 0);
}

TEST_CASE("retain_by_quantile drops exactly the lowest-density point at 0.9") {
  // 9 clustered points plus one far outlier give 10 distinct densities
  FeatureMatrix pts(0, 1);
  for (int i = 0; i < 9; ++i) {
    const double row[1] = {0.05 * i};
    pts.append_row(row);
  }
  const double outlier[1] = {50.0};
  pts.append_row(outlier);
  const KernelDensity kde = KernelDensity::fit_with_bandwidth(pts, {0.5});
  const QuantileFilter f = retain_by_quantile(kde, pts, 0.9);
  CHECK(f.retained.size() == 9);
  CHECK(std::find(f.retained.begin(), f.retained.end(), 9) == f.retained.end());
}

TEST_CASE("retained count lands on the floor/ceil of the fraction") {
  RngStream rng(48, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 3 + rng.next_index(40);
    const FeatureMatrix pts = random_cloud(m, 2, rng);
    const KernelDensity kde = KernelDensity::fit(pts);
    const double q = 0.05 + 0.9 * rng.next_double();
    const QuantileFilter f = retain_by_quantile(kde, pts, q);
    const double qm = q * static_cast<double>(m);
    CHECK(f.retained.size() >= static_cast<std::size_t>(std::floor(qm)));
    CHECK(f.retained.size() <= static_cast<std::size_t>(std::ceil(qm)));
  }
}

TEST_CASE("larger retain fractions keep supersets") {
  RngStream rng(49, 0);
  const FeatureMatrix pts = random_cloud(30, 2, rng);
  const KernelDensity kde = KernelDensity::fit(pts);
  const QuantileFilter lo = retain_by_quantile(kde, pts, 0.4);
  const QuantileFilter hi = retain_by_quantile(kde, pts, 0.8);
  for (auto i : lo.retained)
    CHECK(std::find(hi.retained.begin(), hi.retained.end(), i) != hi.retained.end());
}
