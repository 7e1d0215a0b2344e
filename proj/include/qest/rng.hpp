#pragma once

#include <cstdint>

namespace qest {

// Deterministic counter-based generator (splitmix64 core). Streams are
// derived by hashing the master seed with integer tags, so per-block /
// per-restart / per-shot streams are independent of scheduling order.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  /// Child stream tagged by one or more integers.
  template <typename... Tags>
  [[nodiscard]] Rng derive(Tags... tags) const {
    std::uint64_t s = state_;
    ((s = mix(s ^ (0xd1b54a32d192ed03ULL * static_cast<std::uint64_t>(tags)))),
     ...);
    return Rng(mix(s));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t next_index(std::uint64_t n) { return next_u64() % n; }

  /// Uniform angle in [-pi, pi).
  double next_angle() {
    return -3.14159265358979323846 + 2.0 * 3.14159265358979323846 * next_double();
  }

private:
  std::uint64_t state_;
};

}  // namespace qest
