#include "cgrp/exact.hpp"

#include <limits>
#include <vector>

#include "cgrp/error.hpp"

namespace cgrp::exact {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct BruteForce {
  const CandidateSet& cs;
  const CostMatrix& cm;
  std::vector<int> path{kDepotIndex};
  std::vector<std::uint8_t> visited;
  std::vector<int> best_path;
  double best = kInf;
  std::uint64_t nodes = 0;

  // Children are visited in increasing candidate index, so sequences arrive
  // in lexicographic order and only a strict improvement replaces the best.
  void search(double cost_so_far) {
    ++nodes;
    const int last = path.back();
    if (path.size() == static_cast<std::size_t>(cs.num_tasks()) + 1) {
      const double total = cost_so_far + cm(last, kDepotIndex);
      if (total < best - kCostEps) {
        best = total;
        best_path = path;
      }
      return;
    }
    for (int c = 1; c < static_cast<int>(cs.size()); ++c) {
      const auto t = static_cast<std::size_t>(cs.task_of(c));
      if (visited[t]) {
        continue;
      }
      visited[t] = 1;
      path.push_back(c);
      search(cost_so_far + cm(last, c) + cs.service_cost(c));
      path.pop_back();
      visited[t] = 0;
    }
  }
};

}  // namespace

ExactResult solve_bruteforce(const Problem& problem) {
  const auto& cs = problem.candidates();
  if (cs.num_tasks() > kMaxBruteForceTasks) {
    throw Error(ErrorCode::kTooLarge, "brute force supports at most " +
                                          std::to_string(kMaxBruteForceTasks) + " tasks, got " +
                                          std::to_string(cs.num_tasks()));
  }
  BruteForce bf{cs, problem.costs(), {kDepotIndex},
                std::vector<std::uint8_t>(static_cast<std::size_t>(cs.num_tasks()), 0), {}};
  bf.search(0.0);
  ExactResult r;
  r.tour.order = bf.best_path;
  r.objective = problem.evaluate(r.tour);
  r.nodes_expanded = bf.nodes;
  return r;
}

ExactResult solve_dp(const Problem& problem) {
  const auto& cs = problem.candidates();
  const auto& cm = problem.costs();
  const int n_tasks = cs.num_tasks();
  const int n_cand = static_cast<int>(cs.size());
  if (n_tasks > kMaxDpTasks || n_cand > kMaxDpCandidates + 1) {
    throw Error(ErrorCode::kTooLarge,
                "dp supports at most " + std::to_string(kMaxDpTasks) + " tasks and " +
                    std::to_string(kMaxDpCandidates) + " candidates, got " +
                    std::to_string(n_tasks) + " tasks and " + std::to_string(n_cand - 1) +
                    " candidates");
  }

  ExactResult r;
  if (n_tasks == 0) {
    r.tour.order = {kDepotIndex};
    r.objective = problem.evaluate(r.tour);
    return r;
  }

  const std::uint32_t full = (1U << n_tasks) - 1U;
  const auto stride = static_cast<std::size_t>(n_cand);
  // togo[S·|V| + j]: cheapest completion after servicing the tasks in S and
  // leaving candidate j (task(j) ∈ S), including the return to the depot.
  std::vector<double> togo((static_cast<std::size_t>(full) + 1) * stride, kInf);
  auto at = [&](std::uint32_t s, int j) -> double& {
    return togo[static_cast<std::size_t>(s) * stride + static_cast<std::size_t>(j)];
  };
  auto bit = [&](int c) { return 1U << cs.task_of(c); };

  for (int j = 1; j < n_cand; ++j) {
    at(full, j) = cm(j, kDepotIndex);
  }
  for (std::uint32_t s = full; s-- > 1;) {
    for (int j = 1; j < n_cand; ++j) {
      if (!(s & bit(j))) {
        continue;
      }
      ++r.nodes_expanded;
      double best = kInf;
      for (int c = 1; c < n_cand; ++c) {
        const std::uint32_t b = bit(c);
        if (s & b) {
          continue;
        }
        const double v = cm(j, c) + cs.service_cost(c) + at(s | b, c);
        if (v < best) {
          best = v;
        }
      }
      at(s, j) = best;
    }
  }

  auto value_from = [&](std::uint32_t s, int from, int c) {
    return cm(from, c) + cs.service_cost(c) + at(s | bit(c), c);
  };
  double opt = kInf;
  for (int c = 1; c < n_cand; ++c) {
    opt = std::min(opt, value_from(0, kDepotIndex, c));
  }

  // Forward reconstruction: the smallest candidate that stays within
  // tolerance of the optimum yields the lexicographically smallest tour.
  r.tour.order = {kDepotIndex};
  std::uint32_t s = 0;
  int from = kDepotIndex;
  double spent = 0.0;
  while (s != full) {
    for (int c = 1; c < n_cand; ++c) {
      if (s & bit(c)) {
        continue;
      }
      const double step = cm(from, c) + cs.service_cost(c);
      if (spent + step + at(s | bit(c), c) <= opt + kCostEps) {
        spent += step;
        s |= bit(c);
        from = c;
        r.tour.order.push_back(c);
        break;
      }
    }
  }
  r.objective = problem.evaluate(r.tour);
  return r;
}

}  // namespace cgrp::exact
