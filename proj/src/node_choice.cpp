#include "cgrp/node_choice.hpp"

namespace cgrp {

Tour node_choice_optimization(const Tour& tour, const CandidateSet& cs, const CostMatrix& cm,
                              int max_passes) {
  NodeChoiceStats stats;
  return node_choice_optimization(tour, cs, cm, max_passes, stats);
}

Tour node_choice_optimization(const Tour& tour, const CandidateSet& cs, const CostMatrix& cm,
                              int max_passes, NodeChoiceStats& stats) {
  stats = {};
  Tour out = tour;
  auto& order = out.order;
  const std::size_t n = order.size();
  if (n < 2) {
    return out;
  }
  for (int pass = 0; pass < max_passes; ++pass) {
    ++stats.passes;
    bool changed = false;
    for (std::size_t pos = 1; pos < n; ++pos) {
      const int prev = order[pos - 1];
      const int next = order[(pos + 1) % n];
      auto local = [&](int c) { return cm(prev, c) + cs.service_cost(c) + cm(c, next); };
      int best = order[pos];
      double best_cost = local(best);
      for (const int s : cs.siblings(cs.task_of(best))) {
        const double cost = local(s);
        if (cost < best_cost - kCostEps) {
          best = s;
          best_cost = cost;
        }
      }
      if (best != order[pos]) {
        order[pos] = best;
        ++stats.swaps;
        changed = true;
      }
    }
    if (!changed) {
      break;
    }
  }
  return out;
}

}  // namespace cgrp
