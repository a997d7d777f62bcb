#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "cgrp/costmodel.hpp"
#include "cgrp/report.hpp"
#include "cgrp/rng.hpp"

namespace cgrp::alns {

struct AlnsConfig {
  int max_iterations = 500;
  double destroy_ratio = 0.3;
  double init_temp_factor = 0.05;
  double cooling_rate = 0.98;
  double reaction_factor = 0.1;
  int weight_update_period = 100;
  int node_choice_period = 10;
  int node_choice_passes = 5;
  double score_global_best = 3.0;
  double score_improved = 1.0;
  double score_accepted = 0.2;
  double score_rejected = 0.0;
  /// Lower bound applied after each weight update so selection never starves.
  double min_weight = 1e-6;
  std::uint64_t seed = 0;

  /// Empty when valid.
  [[nodiscard]] std::string validate() const;
};

/// A tour with some tasks taken out; the depot stays at position 0.
struct PartialTour {
  std::vector<int> order;
  std::vector<int> removed_tasks;  ///< ascending task ids
};

enum DestroyOp : int { kRandomRemoval = 0, kWorstRemoval = 1, kRelatedRemoval = 2 };
enum RepairOp : int { kGreedyInsertion = 0, kRegretInsertion = 1 };

inline constexpr int kNumDestroy = 3;
inline constexpr int kNumRepair = 2;

struct OperatorWeights {
  std::array<double, kNumDestroy> destroy_weights{1.0, 1.0, 1.0};
  std::array<double, kNumRepair> repair_weights{1.0, 1.0};
  std::array<double, kNumDestroy> destroy_scores{};
  std::array<double, kNumRepair> repair_scores{};
  std::array<int, kNumDestroy> destroy_uses{};
  std::array<int, kNumRepair> repair_uses{};
};

/// Simulated-annealing bookkeeping for one run.
struct SaState {
  double temperature = 0.0;
  double current_objective = std::numeric_limits<double>::infinity();
  double best_objective = std::numeric_limits<double>::infinity();

  void cool(double rate) noexcept { temperature *= rate; }
};

/// ⌈ρ·N⌉ clamped to [1, N].
[[nodiscard]] int removal_count(int num_tasks, double ratio) noexcept;

/// Greedy construction from the depot: repeatedly append the unvisited
/// task's candidate minimizing travel plus service cost (lowest index on ties).
[[nodiscard]] Tour initial_solution(const CandidateSet& cs, const CostMatrix& cm);

[[nodiscard]] PartialTour destroy_random(const Tour& tour, double ratio, Rng& rng,
                                         const CandidateSet& cs);

/// Removes the tasks with largest detour d[prev][i] + c[i] + d[i][next] − d[prev][next],
/// computed once on the input tour; ties go to the lower task id.
[[nodiscard]] PartialTour destroy_worst(const Tour& tour, double ratio, const CandidateSet& cs,
                                        const CostMatrix& cm);

/// Removes a random seed task and the tasks whose anchors lie nearest to it.
[[nodiscard]] PartialTour destroy_related(const Tour& tour, double ratio, Rng& rng,
                                          const CandidateSet& cs);

/// Cheapest insertion, one (task, candidate, position) triple at a time.
/// Ties go to the lowest (task id, candidate id, position).
[[nodiscard]] Tour repair_greedy(const PartialTour& partial, const CandidateSet& cs,
                                 const CostMatrix& cm);

/// Regret-2 insertion: each round inserts the task with the largest gap
/// between its best and second-best insertion triple, at its best triple.
[[nodiscard]] Tour repair_regret(const PartialTour& partial, const CandidateSet& cs,
                                 const CostMatrix& cm);

/// Acceptance test for a candidate solution. Improving moves are always
/// accepted; others with probability exp(−Δ / T). Consumes one uniform
/// draw only for non-improving moves.
[[nodiscard]] bool accept(const SaState& sa, double candidate_objective, Rng& rng);

/// w ← (1 − φ)·w + φ·s̄ with s̄ = score / max(1, uses), then scores and uses reset.
[[nodiscard]] OperatorWeights update_weights(const OperatorWeights& weights, double reaction,
                                             double min_weight = 0.0);

/// Roulette-wheel pick proportional to weights; consumes one uniform draw.
[[nodiscard]] int roulette(std::span<const double> weights, Rng& rng);

[[nodiscard]] SolverReport run(const Problem& problem, const AlnsConfig& config);

[[nodiscard]] nlohmann::json to_json(const AlnsConfig& config);

/// Overrides the fields of `base` present in `j`; unknown keys are rejected.
[[nodiscard]] AlnsConfig config_from_json(const nlohmann::json& j, AlnsConfig base = {});

}  // namespace cgrp::alns
