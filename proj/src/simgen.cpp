#include "smotecls/simgen.hpp"

#include <algorithm>
#include <stdexcept>

namespace smotecls {

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::LargeCluster: return "G1";
    case Provenance::SmallCluster: return "G2";
    case Provenance::MajorBulk: return "major";
    case Provenance::Noise: return "noise";
  }
  return "?";
}

SimulatedData generate_simulation(const SimSpec& spec, RngStream& rng) {
  if (!spec.noise_fresh_draws && spec.n_noise > spec.n_major)
    throw std::invalid_argument("simulate: n_noise exceeds n_major");

  SimulatedData out;
  out.data.feature_names = {"x1", "x2"};
  out.data.positive_token = "minor";
  out.data.default_major_token = "major";
  out.data.features = FeatureMatrix(0, 2);

  auto push = [&](double x1, double x2, ClassLabel label, Provenance tag) {
    const double row[2] = {x1, x2};
    out.data.push_row(row, label);
    out.provenance.push_back(tag);
  };

  constexpr double kClusterStd = 0.1;  // variance 0.01 per coordinate
  for (std::size_t i = 0; i < spec.n_large_cluster; ++i) {
    const double a = rng.next_gaussian(), b = rng.next_gaussian();
    push(-0.3 + kClusterStd * a, kClusterStd * b, ClassLabel::Minor, Provenance::LargeCluster);
  }
  for (std::size_t i = 0; i < spec.n_small_cluster; ++i) {
    const double a = rng.next_gaussian(), b = rng.next_gaussian();
    push(0.3 + kClusterStd * a, kClusterStd * b, ClassLabel::Minor, Provenance::SmallCluster);
  }

  std::vector<std::pair<double, double>> majors(spec.n_major);
  for (auto& m : majors) {
    m.first = -1.0 + 2.0 * rng.next_double();
    m.second = -1.0 + 2.0 * rng.next_double();
  }

  if (spec.noise_fresh_draws) {
    for (const auto& m : majors) push(m.first, m.second, ClassLabel::Major, Provenance::MajorBulk);
    for (std::size_t i = 0; i < spec.n_noise; ++i) {
      const double x1 = -1.0 + 2.0 * rng.next_double();
      const double x2 = -1.0 + 2.0 * rng.next_double();
      push(x1, x2, ClassLabel::Minor, Provenance::Noise);
    }
  } else {
    // choose n_noise distinct major rows to relabel
    std::vector<std::size_t> idx(spec.n_major);
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < spec.n_noise; ++i) {
      const std::size_t j = i + rng.next_index(idx.size() - i);
      std::swap(idx[i], idx[j]);
    }
    std::vector<bool> swapped(spec.n_major, false);
    for (std::size_t i = 0; i < spec.n_noise; ++i) swapped[idx[i]] = true;
    for (std::size_t i = 0; i < spec.n_major; ++i)
      if (!swapped[i])
        push(majors[i].first, majors[i].second, ClassLabel::Major, Provenance::MajorBulk);
    for (std::size_t i = 0; i < spec.n_noise; ++i)
      push(majors[idx[i]].first, majors[idx[i]].second, ClassLabel::Minor, Provenance::Noise);
  }
  return out;
}

}  // namespace smotecls
