#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace smotecls {

// Counter-based pseudo-random stream. The i-th output is a pure function of
// (key, i), where the key is derived from a (seed, stream id) pair, so two
// streams with the same parameters produce the same sequence regardless of
// how other streams were used. split() derives an independent child stream
// without consuming state from the parent.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) {
    key_ = mix(mix(seed + kGolden) ^ mix(stream_id + kStreamSalt));
  }

  std::uint64_t next_u64() { return mix(key_ + (++counter_) * kGolden); }

  // Uniform on [0, 1) with 53 bits of precision.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double next_gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - next_double();  // (0, 1], keeps log finite
    const double u2 = next_double();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * kPi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  // Uniform on {0, ..., bound-1}, unbiased via rejection.
  std::size_t next_index(std::size_t bound) {
    const std::uint64_t b = bound;
    const std::uint64_t limit = (UINT64_MAX / b) * b;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return static_cast<std::size_t>(v % b);
  }

  // Independent child stream; does not advance this stream.
  RngStream split(std::uint64_t substream) const {
    RngStream child(0, 0);
    child.key_ = mix(key_ ^ mix(substream + kSplitSalt));
    child.counter_ = 0;
    return child;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = next_index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  static constexpr std::uint64_t kStreamSalt = 0xd1b54a32d192ed03ULL;
  static constexpr std::uint64_t kSplitSalt = 0x2545f4914f6cdd1dULL;
  static constexpr double kPi = 3.14159265358979323846;

  // SplitMix64 finalizer.
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace smotecls
