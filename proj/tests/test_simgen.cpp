#include <doctest.h>

#include <cmath>

#include "smotecls/simgen.hpp"

using namespace smotecls;

TEST_CASE("default spec produces 150 minor and 1450 major rows") {
  RngStream rng(121, 0);
  const SimulatedData sim = generate_simulation({}, rng);
  CHECK(sim.data.size() == 1600);
  CHECK(sim.data.count(ClassLabel::Minor) == 150);
  CHECK(sim.data.count(ClassLabel::Major) == 1450);
  CHECK(sim.provenance.size() == 1600);

  std::size_t counts[4] = {0, 0, 0, 0};
  for (auto p : sim.provenance) ++counts[static_cast<std::size_t>(p)];
  CHECK(counts[0] == 80);    // large cluster
  CHECK(counts[1] == 20);    // small cluster
  CHECK(counts[2] == 1450);  // remaining majors
  CHECK(counts[3] == 50);    // noise

  // noise rows carry the minor label but live on the uniform support
  for (std::size_t i = 0; i < sim.data.size(); ++i) {
    if (sim.provenance[i] == Provenance::Noise) {
      CHECK(sim.data.labels[i] == ClassLabel::Minor);
      CHECK(sim.data.features.at(i, 0) >= -1.0);
      CHECK(sim.data.features.at(i, 0) <= 1.0);
      CHECK(sim.data.features.at(i, 1) >= -1.0);
      CHECK(sim.data.features.at(i, 1) <= 1.0);
    }
  }
}

TEST_CASE("zero-noise spec keeps the minor set to the two clusters") {
  SimSpec spec;
  spec.n_noise = 0;
  RngStream rng(122, 0);
  const SimulatedData sim = generate_simulation(spec, rng);
  CHECK(sim.data.count(ClassLabel::Minor) == 100);
  for (std::size_t i = 0; i < sim.data.size(); ++i) {
    if (sim.data.labels[i] == ClassLabel::Minor)
      CHECK((sim.provenance[i] == Provenance::LargeCluster ||
             sim.provenance[i] == Provenance::SmallCluster));
  }
}

TEST_CASE("fresh-draw noise keeps all 1500 majors") {
  SimSpec spec;
  spec.noise_fresh_draws = true;
  RngStream rng(123, 0);
  const SimulatedData sim = generate_simulation(spec, rng);
  CHECK(sim.data.size() == 1650);
  CHECK(sim.data.count(ClassLabel::Major) == 1500);
  CHECK(sim.data.count(ClassLabel::Minor) == 150);
}

TEST_CASE("large-cluster draws have the configured moments") {
  SimSpec spec;
  spec.n_large_cluster = 10000;
  spec.n_small_cluster = 0;
  spec.n_major = 2;
  spec.n_noise = 0;
  RngStream rng(124, 0);
  const SimulatedData sim = generate_simulation(spec, rng);

  double mean_x = 0.0, mean_y = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < sim.data.size(); ++i) {
    if (sim.provenance[i] != Provenance::LargeCluster) continue;
    mean_x += sim.data.features.at(i, 0);
    mean_y += sim.data.features.at(i, 1);
    ++n;
  }
  REQUIRE(n == 10000);
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);
  const double bound = 3.0 * 0.1 / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(mean_x - (-0.3)) < bound);
  CHECK(std::abs(mean_y - 0.0) < bound);
}

TEST_CASE("identical streams reproduce the dataset") {
  RngStream r1(125, 4), r2(125, 4);
  const SimulatedData a = generate_simulation({}, r1);
  const SimulatedData b = generate_simulation({}, r2);
  CHECK(a.data.features.values == b.data.features.values);
  CHECK(a.data.labels == b.data.labels);
}

TEST_CASE("noise larger than the major pool is rejected") {
  SimSpec spec;
  spec.n_noise = 2000;
  RngStream rng(126, 0);
  CHECK_THROWS_AS(generate_simulation(spec, rng), std::invalid_argument);
}
