#pragma once

#include <cstdint>
#include <random>

namespace mmslab {

/// Deterministic RNG wrapper. mt19937_64 has a fully specified sequence;
/// uniforms are derived by hand so reports are byte-identical across
/// standard library implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed), seed_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) { return eng_() % n; }

  /// Independent stream derived from the master seed, e.g. one per restart.
  Rng fork(std::uint64_t salt) const {
    return Rng(seed_ ^ (0x9e3779b97f4a7c15ULL * (salt + 1)));
  }

private:
  std::mt19937_64 eng_;
  std::uint64_t seed_;
};

}  // namespace mmslab
