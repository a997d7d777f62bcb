#pragma once

#include "cgrp/costmodel.hpp"

namespace cgrp {

inline constexpr int kDefaultNodeChoicePasses = 5;

/// With the task order fixed, sweep the tour and give each position the
/// sibling candidate minimizing d[prev][·] + c[·] + d[·][next]. Repeats until
/// a pass changes nothing or `max_passes` passes ran. Never increases the
/// objective.
[[nodiscard]] Tour node_choice_optimization(const Tour& tour, const CandidateSet& cs,
                                            const CostMatrix& cm,
                                            int max_passes = kDefaultNodeChoicePasses);

/// Counters reported by one node_choice_optimization call.
struct NodeChoiceStats {
  int passes = 0;
  int swaps = 0;
};

[[nodiscard]] Tour node_choice_optimization(const Tour& tour, const CandidateSet& cs,
                                            const CostMatrix& cm, int max_passes,
                                            NodeChoiceStats& stats);

}  // namespace cgrp
