#include "cgrp/rng.hpp"

#include <cassert>
#include <limits>

#include "cgrp/error.hpp"

namespace cgrp {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kGenerationFailure: return "generation-failure";
    case ErrorCode::kUnsupportedOmega: return "unsupported-omega";
    case ErrorCode::kInvalidTour: return "invalid-tour";
    case ErrorCode::kIllegalAction: return "illegal-action";
    case ErrorCode::kNotTerminal: return "not-terminal";
    case ErrorCode::kTooLarge: return "too-large";
    case ErrorCode::kShapeMismatch: return "shape-mismatch";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kParse: return "parse-error";
  }
  return "unknown";
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

double Rng::uniform() {
  return static_cast<double>(_engine() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) {
  assert(n > 0);
  // Rejection on the top of the range keeps the draw unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = _engine();
  while (x >= limit) {
    x = _engine();
  }
  return x % n;
}

int Rng::uniform_int(int lo, int hi) {
  assert(lo < hi);
  return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo)));
}

}  // namespace cgrp
