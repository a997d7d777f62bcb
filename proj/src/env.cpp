#include "cgrp/env.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cgrp/error.hpp"

namespace cgrp {

bool EnvState::terminal() const noexcept {
  return std::all_of(visited_tasks.begin(), visited_tasks.end(), [](std::uint8_t v) { return v; });
}

std::vector<int> EnvState::feasible_actions() const {
  std::vector<int> out;
  if (terminal()) {
    return out;
  }
  for (std::size_t c = 0; c < masked.size(); ++c) {
    if (!masked[c]) {
      out.push_back(static_cast<int>(c));
    }
  }
  return out;
}

int EnvState::num_feasible() const noexcept {
  if (terminal()) {
    return 0;
  }
  return static_cast<int>(std::count(masked.begin(), masked.end(), std::uint8_t{0}));
}

EnvState reset(const Problem& problem) {
  const auto& cs = problem.candidates();
  EnvState s;
  s.problem = &problem;
  s.visited_tasks.assign(static_cast<std::size_t>(cs.num_tasks()), 0);
  s.masked.assign(cs.size(), 0);
  s.masked[kDepotIndex] = cs.num_tasks() > 0 ? 1 : 0;
  s.current = kDepotIndex;
  s.step = 0;
  s.partial.order = {kDepotIndex};
  return s;
}

EnvState step(const EnvState& state, int action) {
  const auto& cs = state.problem->candidates();
  if (state.terminal()) {
    throw Error(ErrorCode::kIllegalAction, "step called on a terminal state");
  }
  if (action < 0 || action >= static_cast<int>(cs.size()) ||
      state.masked[static_cast<std::size_t>(action)]) {
    throw Error(ErrorCode::kIllegalAction,
                "candidate " + std::to_string(action) + " is masked at step " +
                    std::to_string(state.step));
  }
  EnvState next = state;
  const int task = cs.task_of(action);
  next.visited_tasks[static_cast<std::size_t>(task)] = 1;
  for (const int s : cs.siblings(task)) {
    next.masked[static_cast<std::size_t>(s)] = 1;
  }
  next.current = action;
  next.partial.order.push_back(action);
  ++next.step;
  if (next.terminal()) {
    next.masked[kDepotIndex] = 0;
  }
  return next;
}

double terminal_reward(const EnvState& state) {
  if (!state.terminal()) {
    throw Error(ErrorCode::kNotTerminal,
                "reward requested at step " + std::to_string(state.step) + " of " +
                    std::to_string(state.visited_tasks.size()));
  }
  return -state.problem->evaluate(state.partial);
}

Decision NearestEntryPolicy::choose(const EnvState& state, std::span<const std::uint8_t> feasible,
                                    Rng& /*rng*/) {
  const auto& cm = state.problem->costs();
  int best = -1;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < feasible.size(); ++c) {
    if (!feasible[c]) {
      continue;
    }
    const double d = cm(state.current, static_cast<int>(c));
    if (d < best_cost - kCostEps) {
      best = static_cast<int>(c);
      best_cost = d;
    }
  }
  return {best, 0.0};
}

Decision UniformRandomPolicy::choose(const EnvState& /*state*/,
                                     std::span<const std::uint8_t> feasible, Rng& rng) {
  std::vector<int> options;
  for (std::size_t c = 0; c < feasible.size(); ++c) {
    if (feasible[c]) {
      options.push_back(static_cast<int>(c));
    }
  }
  const auto k = rng.below(options.size());
  return {options[k], -std::log(static_cast<double>(options.size()))};
}

double RolloutResult::total_log_prob() const noexcept {
  double s = 0.0;
  for (const double lp : log_probs) {
    s += lp;
  }
  return s;
}

RolloutResult rollout(const Problem& problem, Policy& policy, std::uint64_t seed) {
  Rng rng(seed);
  EnvState state = reset(problem);
  RolloutResult result;
  std::vector<std::uint8_t> feasible(state.masked.size());
  while (!state.terminal()) {
    for (std::size_t c = 0; c < feasible.size(); ++c) {
      feasible[c] = state.masked[c] ? 0 : 1;
    }
    const Decision d = policy.choose(state, feasible, rng);
    state = step(state, d.action);
    result.log_probs.push_back(d.log_prob);
  }
  result.tour = state.partial;
  result.objective = problem.evaluate(result.tour);
  return result;
}

}  // namespace cgrp
