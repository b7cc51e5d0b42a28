#pragma once

#include <cstddef>
#include <vector>

#include "smotecls/dataset.hpp"
#include "smotecls/rng.hpp"

namespace smotecls {

// Two-dimensional benchmark with within-class imbalance: a large and a small
// Gaussian minority cluster inside a uniform majority, plus label-swapped
// noise reassigned from the majority.
struct SimSpec {
  std::size_t n_large_cluster = 80;   // draws from N((-0.3, 0), 0.01 I)
  std::size_t n_small_cluster = 20;   // draws from N((0.3, 0), 0.01 I)
  std::size_t n_major = 1500;         // uniform on [-1, 1]^2
  std::size_t n_noise = 50;           // major rows relabeled minor
  bool noise_fresh_draws = false;     // true: draw new uniform points instead
};

enum class Provenance : std::uint8_t { LargeCluster = 0, SmallCluster = 1, MajorBulk = 2, Noise = 3 };
const char* provenance_name(Provenance p);

struct SimulatedData {
  LabeledDataset data;
  std::vector<Provenance> provenance;
};

SimulatedData generate_simulation(const SimSpec& spec, RngStream& rng);

}  // namespace smotecls
