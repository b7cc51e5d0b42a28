#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "smotecls/rng.hpp"

using smotecls::RngStream;

TEST_CASE("identical seed and stream reproduce the sequence") {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different streams differ") {
  RngStream a(42, 0), b(42, 1);
  int same = 0;
  for (int i = 0; i < 64; ++i)
    if (a.next_u64() == b.next_u64()) ++same;
  CHECK(same == 0);
}

TEST_CASE("split does not consume parent state") {
  RngStream a(1, 2);
  RngStream child1 = a.split(5);
  (void)a.next_u64();
  RngStream child2 = a.split(5);
  for (int i = 0; i < 16; ++i) CHECK(child1.next_u64() == child2.next_u64());
}

TEST_CASE("uniform doubles stay in [0, 1) with sane mean") {
  RngStream rng(3, 0);
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_double();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("gaussian moments") {
  RngStream rng(9, 1);
  const int n = 50000;
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.next_gaussian();
    s1 += g;
    s2 += g * g;
  }
  const double mean = s1 / n;
  const double var = s2 / n - mean * mean;
  CHECK(std::abs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("next_index covers the range uniformly enough") {
  RngStream rng(11, 0);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 7000; ++i) ++counts[rng.next_index(7)];
  for (int c : counts) CHECK(std::abs(c - 1000) < 150);
}

TEST_CASE("shuffle is a permutation") {
  RngStream rng(5, 5);
  std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  rng.shuffle(v);
  std::vector<bool> seen(10, false);
  for (int x : v) seen[static_cast<std::size_t>(x)] = true;
  for (bool s : seen) CHECK(s);
}
