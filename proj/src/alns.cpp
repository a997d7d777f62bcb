#include "cgrp/alns.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>

#include "cgrp/error.hpp"
#include "cgrp/node_choice.hpp"

namespace cgrp::alns {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Insertion {
  double delta = kInf;
  int candidate = -1;
  std::size_t position = 0;
};

// Inserting c before order[pos] (pos == size appends before the return edge).
double insertion_delta(const std::vector<int>& order, std::size_t pos, int c,
                       const CandidateSet& cs, const CostMatrix& cm) {
  const int prev = order[pos - 1];
  const int next = pos < order.size() ? order[pos] : kDepotIndex;
  return cm(prev, c) + cm(c, next) + cs.service_cost(c) - cm(prev, next);
}

// Best and second-best insertion triples for one task, in (candidate, position) scan order.
std::pair<Insertion, double> best_insertions(const std::vector<int>& order, int task,
                                             const CandidateSet& cs, const CostMatrix& cm) {
  Insertion best;
  double second = kInf;
  for (const int c : cs.siblings(task)) {
    for (std::size_t pos = 1; pos <= order.size(); ++pos) {
      const double d = insertion_delta(order, pos, c, cs, cm);
      if (d < best.delta - kCostEps) {
        second = best.delta;
        best = {d, c, pos};
      } else if (d < second) {
        second = d;
      }
    }
  }
  return {best, second};
}

PartialTour remove_tasks(const Tour& tour, std::vector<int> tasks, const CandidateSet& cs) {
  std::sort(tasks.begin(), tasks.end());
  PartialTour out;
  out.order.reserve(tour.order.size() - tasks.size());
  for (const int c : tour.order) {
    if (c == kDepotIndex || !std::binary_search(tasks.begin(), tasks.end(), cs.task_of(c))) {
      out.order.push_back(c);
    }
  }
  out.removed_tasks = std::move(tasks);
  return out;
}

std::vector<int> tour_tasks(const Tour& tour, const CandidateSet& cs) {
  std::vector<int> tasks;
  tasks.reserve(tour.order.size());
  for (std::size_t i = 1; i < tour.order.size(); ++i) {
    tasks.push_back(cs.task_of(tour.order[i]));
  }
  return tasks;
}

Tour apply_repair(int op, const PartialTour& partial, const CandidateSet& cs, const CostMatrix& cm) {
  return op == kGreedyInsertion ? repair_greedy(partial, cs, cm) : repair_regret(partial, cs, cm);
}

PartialTour apply_destroy(int op, const Tour& tour, double ratio, Rng& rng, const CandidateSet& cs,
                          const CostMatrix& cm) {
  switch (op) {
    case kRandomRemoval: return destroy_random(tour, ratio, rng, cs);
    case kWorstRemoval: return destroy_worst(tour, ratio, cs, cm);
    default: return destroy_related(tour, ratio, rng, cs);
  }
}

}  // namespace

std::string AlnsConfig::validate() const {
  if (max_iterations < 0) return "max_iterations must be >= 0";
  if (!(destroy_ratio > 0.0 && destroy_ratio < 1.0)) return "destroy_ratio must lie in (0, 1)";
  if (!(cooling_rate > 0.0 && cooling_rate < 1.0)) return "cooling_rate must lie in (0, 1)";
  if (!(reaction_factor >= 0.0 && reaction_factor <= 1.0)) return "reaction_factor must lie in [0, 1]";
  if (!(init_temp_factor >= 0.0)) return "init_temp_factor must be >= 0";
  if (weight_update_period < 1) return "weight_update_period must be >= 1";
  if (node_choice_period < 1) return "node_choice_period must be >= 1";
  if (node_choice_passes < 1) return "node_choice_passes must be >= 1";
  if (!(min_weight >= 0.0)) return "min_weight must be >= 0";
  return {};
}

int removal_count(int num_tasks, double ratio) noexcept {
  // The snap keeps products like 0.3·10 = 3.0000000000000004 at 3.
  const int k = static_cast<int>(std::ceil(ratio * num_tasks - 1e-9));
  return std::clamp(k, 1, std::max(1, num_tasks));
}

Tour initial_solution(const CandidateSet& cs, const CostMatrix& cm) {
  Tour tour{{kDepotIndex}};
  std::vector<std::uint8_t> visited(static_cast<std::size_t>(cs.num_tasks()), 0);
  int current = kDepotIndex;
  for (int step = 0; step < cs.num_tasks(); ++step) {
    int best = -1;
    double best_cost = kInf;
    for (int c = 1; c < static_cast<int>(cs.size()); ++c) {
      if (visited[static_cast<std::size_t>(cs.task_of(c))]) {
        continue;
      }
      const double cost = cm(current, c) + cs.service_cost(c);
      if (cost < best_cost - kCostEps) {
        best = c;
        best_cost = cost;
      }
    }
    visited[static_cast<std::size_t>(cs.task_of(best))] = 1;
    tour.order.push_back(best);
    current = best;
  }
  return tour;
}

PartialTour destroy_random(const Tour& tour, double ratio, Rng& rng, const CandidateSet& cs) {
  std::vector<int> tasks = tour_tasks(tour, cs);
  if (tasks.empty()) {
    return {tour.order, {}};
  }
  const int k = removal_count(static_cast<int>(tasks.size()), ratio);
  // Partial Fisher–Yates: the first k slots become the removed sample.
  for (int i = 0; i < k; ++i) {
    const auto j = static_cast<std::size_t>(i) + rng.below(tasks.size() - static_cast<std::size_t>(i));
    std::swap(tasks[static_cast<std::size_t>(i)], tasks[j]);
  }
  tasks.resize(static_cast<std::size_t>(k));
  return remove_tasks(tour, std::move(tasks), cs);
}

PartialTour destroy_worst(const Tour& tour, double ratio, const CandidateSet& cs,
                          const CostMatrix& cm) {
  const auto& order = tour.order;
  const std::size_t n = order.size();
  if (n < 2) {
    return {order, {}};
  }
  std::vector<std::pair<double, int>> detours;  // (detour, task)
  detours.reserve(n - 1);
  for (std::size_t pos = 1; pos < n; ++pos) {
    const int prev = order[pos - 1];
    const int c = order[pos];
    const int next = order[(pos + 1) % n];
    detours.emplace_back(cm(prev, c) + cs.service_cost(c) + cm(c, next) - cm(prev, next),
                         cs.task_of(c));
  }
  std::sort(detours.begin(), detours.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  const int k = removal_count(static_cast<int>(n - 1), ratio);
  std::vector<int> tasks;
  for (int i = 0; i < k; ++i) {
    tasks.push_back(detours[static_cast<std::size_t>(i)].second);
  }
  return remove_tasks(tour, std::move(tasks), cs);
}

PartialTour destroy_related(const Tour& tour, double ratio, Rng& rng, const CandidateSet& cs) {
  const std::vector<int> tasks = tour_tasks(tour, cs);
  if (tasks.empty()) {
    return {tour.order, {}};
  }
  const int seed_task = tasks[rng.below(tasks.size())];
  auto anchor_of = [&](int task) { return cs[static_cast<std::size_t>(cs.siblings(task)[0])].anchor; };
  const Vec2 origin = anchor_of(seed_task);

  std::vector<std::pair<double, int>> nearest;  // (distance, task)
  for (const int t : tasks) {
    if (t != seed_task) {
      nearest.emplace_back(distance(origin, anchor_of(t)), t);
    }
  }
  std::sort(nearest.begin(), nearest.end());
  const int k = removal_count(static_cast<int>(tasks.size()), ratio);
  std::vector<int> removed{seed_task};
  for (int i = 0; i + 1 < k; ++i) {
    removed.push_back(nearest[static_cast<std::size_t>(i)].second);
  }
  return remove_tasks(tour, std::move(removed), cs);
}

Tour repair_greedy(const PartialTour& partial, const CandidateSet& cs, const CostMatrix& cm) {
  std::vector<int> order = partial.order;
  std::vector<int> pending = partial.removed_tasks;
  std::sort(pending.begin(), pending.end());
  while (!pending.empty()) {
    Insertion best;
    std::size_t best_task = 0;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      const auto [ins, second] = best_insertions(order, pending[i], cs, cm);
      if (ins.delta < best.delta - kCostEps) {
        best = ins;
        best_task = i;
      }
    }
    order.insert(order.begin() + static_cast<std::ptrdiff_t>(best.position), best.candidate);
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best_task));
  }
  return {std::move(order)};
}

Tour repair_regret(const PartialTour& partial, const CandidateSet& cs, const CostMatrix& cm) {
  std::vector<int> order = partial.order;
  std::vector<int> pending = partial.removed_tasks;
  std::sort(pending.begin(), pending.end());
  while (!pending.empty()) {
    Insertion chosen;
    double best_regret = -kInf;
    std::size_t chosen_task = 0;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      const auto [ins, second] = best_insertions(order, pending[i], cs, cm);
      const double regret = std::isinf(second) ? kInf : second - ins.delta;
      if (i == 0 || regret > best_regret + kCostEps) {
        best_regret = regret;
        chosen = ins;
        chosen_task = i;
      }
    }
    order.insert(order.begin() + static_cast<std::ptrdiff_t>(chosen.position), chosen.candidate);
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(chosen_task));
  }
  return {std::move(order)};
}

bool accept(const SaState& sa, double candidate_objective, Rng& rng) {
  if (candidate_objective < sa.current_objective) {
    return true;
  }
  if (!(sa.temperature > 0.0)) {
    return false;
  }
  const double p = std::exp(-(candidate_objective - sa.current_objective) / sa.temperature);
  return rng.uniform() < p;
}

OperatorWeights update_weights(const OperatorWeights& weights, double reaction, double min_weight) {
  OperatorWeights out = weights;
  auto blend = [&](auto& w, auto& scores, auto& uses) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double avg = scores[i] / std::max(1, uses[i]);
      w[i] = std::max(min_weight, (1.0 - reaction) * w[i] + reaction * avg);
      scores[i] = 0.0;
      uses[i] = 0;
    }
  };
  blend(out.destroy_weights, out.destroy_scores, out.destroy_uses);
  blend(out.repair_weights, out.repair_scores, out.repair_uses);
  return out;
}

int roulette(std::span<const double> weights, Rng& rng) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  const double u = rng.uniform();
  if (!(total > 0.0)) {
    return static_cast<int>(u * static_cast<double>(weights.size()));
  }
  double acc = 0.0;
  const double target = u * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (target < acc) {
      return static_cast<int>(i);
    }
  }
  return static_cast<int>(weights.size()) - 1;
}

SolverReport run(const Problem& problem, const AlnsConfig& config) {
  if (auto why = config.validate(); !why.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "invalid ALNS config: " + why);
  }
  const auto start = std::chrono::steady_clock::now();
  const auto& cs = problem.candidates();
  const auto& cm = problem.costs();

  // Draw order per iteration: destroy pick, repair pick, destroy operator's
  // own draws, then at most one acceptance draw.
  Rng rng(config.seed);
  Tour current = initial_solution(cs, cm);
  Tour best = current;
  SaState sa;
  sa.current_objective = tour_cost(current.order, cs, cm);
  sa.best_objective = sa.current_objective;
  sa.temperature = config.init_temp_factor * sa.current_objective;
  const double initial = sa.current_objective;

  OperatorWeights weights;
  std::vector<double> trace;
  trace.reserve(static_cast<std::size_t>(config.max_iterations));

  for (int it = 1; it <= config.max_iterations && problem.num_tasks() > 0; ++it) {
    const int d = roulette(weights.destroy_weights, rng);
    const int r = roulette(weights.repair_weights, rng);
    const PartialTour partial = apply_destroy(d, current, config.destroy_ratio, rng, cs, cm);
    Tour candidate = apply_repair(r, partial, cs, cm);
    if (it % config.node_choice_period == 0) {
      candidate = node_choice_optimization(candidate, cs, cm, config.node_choice_passes);
    }
    const double obj = tour_cost(candidate.order, cs, cm);

    double score = config.score_rejected;
    if (accept(sa, obj, rng)) {
      if (obj < sa.best_objective - kCostEps) {
        score = config.score_global_best;
        best = candidate;
        sa.best_objective = obj;
      } else if (obj < sa.current_objective - kCostEps) {
        score = config.score_improved;
      } else {
        score = config.score_accepted;
      }
      current = std::move(candidate);
      sa.current_objective = obj;
    }
    weights.destroy_scores[static_cast<std::size_t>(d)] += score;
    weights.repair_scores[static_cast<std::size_t>(r)] += score;
    ++weights.destroy_uses[static_cast<std::size_t>(d)];
    ++weights.repair_uses[static_cast<std::size_t>(r)];
    sa.cool(config.cooling_rate);
    if (it % config.weight_update_period == 0) {
      weights = update_weights(weights, config.reaction_factor, config.min_weight);
    }
    trace.push_back(sa.best_objective);
  }

  SolverReport report;
  report.solver = "alns";
  report.tour = best;
  report.objective = problem.evaluate(best);
  report.iterations = static_cast<long>(trace.size());
  report.seed = config.seed;
  report.config = to_json(config);
  report.trace = std::move(trace);
  report.initial_objective = initial;
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

nlohmann::json to_json(const AlnsConfig& c) {
  return {
      {"max_iterations", c.max_iterations},
      {"destroy_ratio", c.destroy_ratio},
      {"init_temp_factor", c.init_temp_factor},
      {"cooling_rate", c.cooling_rate},
      {"reaction_factor", c.reaction_factor},
      {"weight_update_period", c.weight_update_period},
      {"node_choice_period", c.node_choice_period},
      {"node_choice_passes", c.node_choice_passes},
      {"score_global_best", c.score_global_best},
      {"score_improved", c.score_improved},
      {"score_accepted", c.score_accepted},
      {"score_rejected", c.score_rejected},
      {"min_weight", c.min_weight},
      {"seed", c.seed},
  };
}

AlnsConfig config_from_json(const nlohmann::json& j, AlnsConfig c) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kParse, "ALNS config must be a JSON object");
  }
  static const std::set<std::string> kKnown = [] {
    std::set<std::string> keys;
    const nlohmann::json defaults = to_json(AlnsConfig{});
    for (const auto& [k, v] : defaults.items()) keys.insert(k);
    return keys;
  }();
  for (const auto& [key, value] : j.items()) {
    if (!kKnown.contains(key)) {
      throw Error(ErrorCode::kParse, "unknown ALNS config field '" + key + "'");
    }
  }
  try {
    c.max_iterations = j.value("max_iterations", c.max_iterations);
    c.destroy_ratio = j.value("destroy_ratio", c.destroy_ratio);
    c.init_temp_factor = j.value("init_temp_factor", c.init_temp_factor);
    c.cooling_rate = j.value("cooling_rate", c.cooling_rate);
    c.reaction_factor = j.value("reaction_factor", c.reaction_factor);
    c.weight_update_period = j.value("weight_update_period", c.weight_update_period);
    c.node_choice_period = j.value("node_choice_period", c.node_choice_period);
    c.node_choice_passes = j.value("node_choice_passes", c.node_choice_passes);
    c.score_global_best = j.value("score_global_best", c.score_global_best);
    c.score_improved = j.value("score_improved", c.score_improved);
    c.score_accepted = j.value("score_accepted", c.score_accepted);
    c.score_rejected = j.value("score_rejected", c.score_rejected);
    c.min_weight = j.value("min_weight", c.min_weight);
    c.seed = j.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("ALNS config: ") + e.what());
  }
  if (auto why = c.validate(); !why.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "invalid ALNS config: " + why);
  }
  return c;
}

}  // namespace cgrp::alns
