#pragma once

#include <cstdint>

#include "cgrp/costmodel.hpp"

namespace cgrp::exact {

inline constexpr int kMaxBruteForceTasks = 7;
inline constexpr int kMaxDpTasks = 16;
inline constexpr int kMaxDpCandidates = 64;

struct ExactResult {
  Tour tour;
  double objective = 0.0;
  std::uint64_t nodes_expanded = 0;
};

/// Enumerates every task order and candidate assignment. Among optimal tours
/// (within kCostEps) the lexicographically smallest candidate sequence wins.
/// Throws Error{kTooLarge} beyond kMaxBruteForceTasks.
[[nodiscard]] ExactResult solve_bruteforce(const Problem& problem);

/// Held–Karp over (visited task set, last candidate). Same tie-breaking as
/// solve_bruteforce. Throws Error{kTooLarge} beyond kMaxDpTasks tasks or
/// kMaxDpCandidates candidates.
[[nodiscard]] ExactResult solve_dp(const Problem& problem);

}  // namespace cgrp::exact
