#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cgrp/costmodel.hpp"
#include "cgrp/rng.hpp"

namespace cgrp {

/// Partial solution of the construction MDP.
///
/// masked[c] is 1 iff the task of c is visited, or c is the depot while some
/// task is unvisited. The depot is never emitted as an action: the episode
/// ends once every task is visited and the return edge is part of the reward.
struct EnvState {
  const Problem* problem = nullptr;
  std::vector<std::uint8_t> visited_tasks;
  std::vector<std::uint8_t> masked;
  int current = kDepotIndex;
  int step = 0;
  Tour partial;

  [[nodiscard]] bool terminal() const noexcept;
  [[nodiscard]] std::vector<int> feasible_actions() const;
  [[nodiscard]] int num_feasible() const noexcept;
};

[[nodiscard]] EnvState reset(const Problem& problem);

/// Throws Error{kIllegalAction} if `action` is masked or the state is terminal.
[[nodiscard]] EnvState step(const EnvState& state, int action);

/// Throws Error{kNotTerminal} on an intermediate state.
[[nodiscard]] double terminal_reward(const EnvState& state);

struct Decision {
  int action = kDepotIndex;
  double log_prob = 0.0;
};

class Policy {
 public:
  virtual ~Policy() = default;
  /// `feasible[c]` is 1 for selectable candidates. Must return one of them.
  virtual Decision choose(const EnvState& state, std::span<const std::uint8_t> feasible,
                          Rng& rng) = 0;
};

/// Feasible candidate with the shortest exit(current) → entry hop; ties go to
/// the lower index.
class NearestEntryPolicy final : public Policy {
 public:
  Decision choose(const EnvState& state, std::span<const std::uint8_t> feasible,
                  Rng& rng) override;
};

/// Uniform over feasible candidates.
class UniformRandomPolicy final : public Policy {
 public:
  Decision choose(const EnvState& state, std::span<const std::uint8_t> feasible,
                  Rng& rng) override;
};

struct RolloutResult {
  Tour tour;
  double objective = 0.0;
  std::vector<double> log_probs;  ///< one per step

  [[nodiscard]] double total_log_prob() const noexcept;
};

[[nodiscard]] RolloutResult rollout(const Problem& problem, Policy& policy, std::uint64_t seed);

}  // namespace cgrp
