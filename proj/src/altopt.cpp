#include "cgrp/altopt.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <limits>
#include <set>
#include <thread>

#include "cgrp/error.hpp"
#include "cgrp/node_choice.hpp"

namespace cgrp::altopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxOrOptSegment = 3;

class RouteSearch {
 public:
  RouteSearch(std::vector<int>& route, const CostMatrix& cm) : _r(route), _cm(cm) {}

  // Successor-aware access: position size() wraps to the depot.
  [[nodiscard]] int at(std::size_t i) const { return i < _r.size() ? _r[i] : _r[0]; }
  [[nodiscard]] double d(int a, int b) const { return _cm(a, b); }

  bool or_opt() {
    const std::size_t last = _r.size() - 1;
    for (std::size_t i = 1; i <= last; ++i) {
      for (std::size_t len = 1; len <= kMaxOrOptSegment && i + len - 1 <= last; ++len) {
        const std::size_t e = i + len - 1;
        const int a = _r[i - 1];
        const int s = _r[i];
        const int t = _r[e];
        const int b = at(e + 1);
        const double removal_gain = d(a, s) + d(t, b) - d(a, b);
        for (std::size_t j = 0; j <= last; ++j) {
          if (j + 1 >= i && j <= e) {
            continue;  // edges touching the segment
          }
          const int p = _r[j];
          const int q = at(j + 1);
          const double added = d(p, s) + d(t, q) - d(p, q);
          if (added - removal_gain < -kCostEps) {
            relocate(i, e, j);
            return true;
          }
        }
      }
    }
    return false;
  }

  // A S1 S2 D → A S2 S1 D with S1 = [i, j), S2 = [j, k).
  bool segment_exchange() {
    const std::size_t end = _r.size();
    for (std::size_t i = 1; i < end; ++i) {
      for (std::size_t j = i + 1; j < end; ++j) {
        const int a = _r[i - 1];
        const int s1_first = _r[i];
        const int s1_last = _r[j - 1];
        const int s2_first = _r[j];
        const double fixed = d(a, s1_first) + d(s1_last, s2_first);
        for (std::size_t k = j + 1; k <= end; ++k) {
          const int s2_last = _r[k - 1];
          const int dd = at(k);
          const double before = fixed + d(s2_last, dd);
          const double after = d(a, s2_first) + d(s2_last, s1_first) + d(s1_last, dd);
          if (after - before < -kCostEps) {
            std::rotate(_r.begin() + static_cast<std::ptrdiff_t>(i),
                        _r.begin() + static_cast<std::ptrdiff_t>(j),
                        _r.begin() + static_cast<std::ptrdiff_t>(k));
            return true;
          }
        }
      }
    }
    return false;
  }

 private:
  // Moves [i, e] to sit after position j.
  void relocate(std::size_t i, std::size_t e, std::size_t j) {
    const auto first = _r.begin() + static_cast<std::ptrdiff_t>(i);
    const auto past = _r.begin() + static_cast<std::ptrdiff_t>(e + 1);
    if (j > e) {
      std::rotate(first, past, _r.begin() + static_cast<std::ptrdiff_t>(j + 1));
    } else {
      std::rotate(_r.begin() + static_cast<std::ptrdiff_t>(j + 1), first, past);
    }
  }

  std::vector<int>& _r;
  const CostMatrix& _cm;
};

struct RestartResult {
  Tour tour;
  double objective = kInf;
  double constructed = kInf;
};

RestartResult run_restart(const Problem& problem, const AltOptConfig& config, int restart) {
  const auto& cs = problem.candidates();
  const auto& cm = problem.costs();
  Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(restart)));
  Tour tour = construct_route(cs, cm, config, restart, rng).tour;
  const double constructed = tour_cost(tour.order, cs, cm);
  for (int a = 0; a < config.alternations_per_restart; ++a) {
    tour = improve_route_asymmetric(tour, cm);
    tour = refine_node_choices(tour, cs, cm, config.refine_passes);
  }
  const double obj = tour_cost(tour.order, cs, cm);
  return {std::move(tour), obj, constructed};
}

}  // namespace

std::string AltOptConfig::validate() const {
  if (restarts < 1) return "restarts must be >= 1";
  if (alternations_per_restart < 1) return "alternations_per_restart must be >= 1";
  if (refine_passes < 1) return "refine_passes must be >= 1";
  if (!(randomization_scale >= 0.0 && randomization_scale < 1.0)) {
    return "randomization_scale must lie in [0, 1)";
  }
  if (workers < 1) return "workers must be >= 1";
  return {};
}

double restart_noise_amplitude(const AltOptConfig& config, int restart_index) noexcept {
  return restart_index * config.randomization_scale / config.restarts;
}

Construction construct_route(const CandidateSet& cs, const CostMatrix& cm,
                             const AltOptConfig& config, int restart_index, Rng& rng) {
  const double amp = restart_noise_amplitude(config, restart_index);
  Construction out{{{kDepotIndex}}, amp};
  std::vector<std::uint8_t> visited(static_cast<std::size_t>(cs.num_tasks()), 0);
  int current = kDepotIndex;
  for (int step = 0; step < cs.num_tasks(); ++step) {
    int best = -1;
    double best_score = kInf;
    for (int c = 1; c < static_cast<int>(cs.size()); ++c) {
      if (visited[static_cast<std::size_t>(cs.task_of(c))]) {
        continue;
      }
      double score = cm(current, c) + cs.service_cost(c);
      if (amp > 0.0) {
        score *= 1.0 + amp * rng.uniform(-1.0, 1.0);
      }
      if (score < best_score - kCostEps) {
        best = c;
        best_score = score;
      }
    }
    visited[static_cast<std::size_t>(cs.task_of(best))] = 1;
    out.tour.order.push_back(best);
    current = best;
  }
  return out;
}

Tour improve_route_asymmetric(const Tour& tour, const CostMatrix& cm) {
  ImproveStats stats;
  return improve_route_asymmetric(tour, cm, stats);
}

Tour improve_route_asymmetric(const Tour& tour, const CostMatrix& cm, ImproveStats& stats) {
  Tour out = tour;
  if (out.order.size() < 3) {
    return out;
  }
  RouteSearch search(out.order, cm);
  for (;;) {
    if (search.or_opt()) {
      ++stats.or_opt_moves;
    } else if (search.segment_exchange()) {
      ++stats.three_opt_moves;
    } else {
      break;
    }
  }
  return out;
}

Tour refine_node_choices(const Tour& tour, const CandidateSet& cs, const CostMatrix& cm,
                         int passes) {
  return node_choice_optimization(tour, cs, cm, passes);
}

SolverReport run(const Problem& problem, const AltOptConfig& config) {
  if (auto why = config.validate(); !why.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "invalid altopt config: " + why);
  }
  const auto start = std::chrono::steady_clock::now();
  std::vector<RestartResult> results(static_cast<std::size_t>(config.restarts));

  const int workers = std::min(config.workers, config.restarts);
  if (workers <= 1) {
    for (int r = 0; r < config.restarts; ++r) {
      results[static_cast<std::size_t>(r)] = run_restart(problem, config, r);
    }
  } else {
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int r = next++; r < config.restarts; r = next++) {
          results[static_cast<std::size_t>(r)] = run_restart(problem, config, r);
        }
      });
    }
  }

  SolverReport report;
  report.solver = "altopt";
  std::size_t best = 0;
  for (std::size_t r = 0; r < results.size(); ++r) {
    report.trace.push_back(results[r].objective);
    if (results[r].objective < results[best].objective - kCostEps) {
      best = r;
    }
  }
  report.tour = results[best].tour;
  report.objective = problem.evaluate(report.tour);
  report.initial_objective = results.front().constructed;
  report.iterations = static_cast<long>(config.restarts) * config.alternations_per_restart;
  report.seed = config.seed;
  report.config = to_json(config);
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

nlohmann::json to_json(const AltOptConfig& c) {
  return {
      {"restarts", c.restarts},
      {"alternations_per_restart", c.alternations_per_restart},
      {"refine_passes", c.refine_passes},
      {"randomization_scale", c.randomization_scale},
      {"workers", c.workers},
      {"seed", c.seed},
  };
}

AltOptConfig config_from_json(const nlohmann::json& j, AltOptConfig c) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kParse, "altopt config must be a JSON object");
  }
  static const std::set<std::string> kKnown = [] {
    std::set<std::string> keys;
    const nlohmann::json defaults = to_json(AltOptConfig{});
    for (const auto& [k, v] : defaults.items()) keys.insert(k);
    return keys;
  }();
  for (const auto& [key, value] : j.items()) {
    if (!kKnown.contains(key)) {
      throw Error(ErrorCode::kParse, "unknown altopt config field '" + key + "'");
    }
  }
  try {
    c.restarts = j.value("restarts", c.restarts);
    c.alternations_per_restart = j.value("alternations_per_restart", c.alternations_per_restart);
    c.refine_passes = j.value("refine_passes", c.refine_passes);
    c.randomization_scale = j.value("randomization_scale", c.randomization_scale);
    c.workers = j.value("workers", c.workers);
    c.seed = j.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("altopt config: ") + e.what());
  }
  if (auto why = c.validate(); !why.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "invalid altopt config: " + why);
  }
  return c;
}

}  // namespace cgrp::altopt
