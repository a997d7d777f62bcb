#pragma once

#include <cstdint>
#include <random>

namespace cgrp {

/// SplitMix64 finalizer. Used to derive independent stream seeds.
[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Derive the seed of a named sub-stream from a parent seed.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Seedable generator with platform-independent draws.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The standard distributions are not, so uniform reals and
/// bounded integers are computed here from raw 64-bit outputs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : _engine(seed) {}

  std::uint64_t next_u64() { return _engine(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform();

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). Requires n > 0.
  std::uint64_t below(std::uint64_t n);

  /// Uniform integer in [lo, hi). Requires lo < hi.
  int uniform_int(int lo, int hi);

 private:
  std::mt19937_64 _engine;
};

}  // namespace cgrp
