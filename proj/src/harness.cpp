#include "cgrp/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <thread>

#include "cgrp/error.hpp"
#include "cgrp/exact.hpp"

namespace cgrp::harness {

namespace {

InstanceSpec fixed(int n, int areas, int lines) {
  InstanceSpec s;
  s.size_range = {n, n + 1};
  s.area_range = {areas, areas + 1};
  s.line_range = {lines, lines + 1};
  return s;
}

// Mixed composition at a fixed size: areas in [0, 5), lines in [0, 20).
InstanceSpec mixed(int n) {
  InstanceSpec s;
  s.size_range = {n, n + 1};
  return s;
}

// Anchor spacing shrinks with N so that dense suites stay placeable.
InstanceSpec spaced(InstanceSpec s) {
  const double n = s.size_range.hi - 1;
  s.min_anchor_separation = std::min(2.0 * s.detection_range, 0.5 / std::sqrt(n));
  return s;
}

const std::map<std::string, InstanceSpec>& presets() {
  static const std::map<std::string, InstanceSpec> kPresets = {
      {"point20", spaced(fixed(20, 0, 0))},    {"point100", spaced(fixed(100, 0, 0))},
      {"line20", spaced(fixed(20, 0, 20))},    {"line100", spaced(fixed(100, 0, 100))},
      {"area20", spaced(fixed(20, 20, 0))},    {"area100", spaced(fixed(100, 100, 0))},
      {"area20line30", spaced(fixed(50, 20, 30))},
      {"area20line80", spaced(fixed(100, 20, 80))},
      {"cgrp20", spaced(mixed(20))},           {"cgrp50", spaced(mixed(50))},
      {"cgrp100", spaced(mixed(100))},         {"cgrp200", spaced(mixed(200))},
      {"cgrp300", spaced(mixed(300))},
  };
  return kPresets;
}

struct Job {
  std::size_t record;
  std::size_t algo;
};

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> kNames = [] {
    std::vector<std::string> names;
    for (const auto& [name, spec] : presets()) names.push_back(name);
    return names;
  }();
  return kNames;
}

InstanceSpec preset_spec(const std::string& name) {
  const auto it = presets().find(name);
  if (it == presets().end()) {
    throw Error(ErrorCode::kInvalidArgument, "unknown preset '" + name + "'");
  }
  return it->second;
}

std::vector<DatasetRecord> generate_dataset(const InstanceSpec& spec, int count,
                                            std::uint64_t seed, const std::string& prefix) {
  if (count < 0) {
    throw Error(ErrorCode::kInvalidArgument, "count must be >= 0");
  }
  std::vector<DatasetRecord> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    std::array<char, 16> idx{};
    std::snprintf(idx.data(), idx.size(), "%06d", k);
    out.push_back({prefix + "-" + idx.data(),
                   generate_instance(spec, seed + static_cast<std::uint64_t>(k))});
  }
  return out;
}

nlohmann::json dataset_manifest(const std::string& source, const InstanceSpec& spec, int count,
                                std::uint64_t seed) {
  return {
      {"manifest_version", kManifestVersion},
      {"instance_version", kInstanceFormatVersion},
      {"format", "jsonl"},
      {"source", source},
      {"spec", to_json(spec)},
      {"count", count},
      {"seed", seed},
  };
}

std::filesystem::path manifest_path(const std::filesystem::path& dataset) {
  return std::filesystem::path(dataset.string() + ".manifest.json");
}

const std::vector<std::string>& solver_names() {
  static const std::vector<std::string> kNames = {"exact-dp", "exact-bf", "alns", "altopt",
                                                  "greedy"};
  return kNames;
}

SolveOptions options_from_json(const nlohmann::json& j, SolveOptions o) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kParse, "solver config must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "alns") {
      o.alns = alns::config_from_json(value, o.alns);
    } else if (key == "altopt") {
      o.altopt = altopt::config_from_json(value, o.altopt);
    } else {
      throw Error(ErrorCode::kParse, "unknown solver config section '" + key + "'");
    }
  }
  return o;
}

SolverReport solve(const Problem& problem, const std::string& algo, const SolveOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  SolverReport report;
  if (algo == "alns") {
    auto cfg = options.alns;
    cfg.seed = options.seed;
    report = alns::run(problem, cfg);
  } else if (algo == "altopt") {
    auto cfg = options.altopt;
    cfg.seed = options.seed;
    report = altopt::run(problem, cfg);
  } else if (algo == "exact-dp" || algo == "exact-bf") {
    const auto res = algo == "exact-dp" ? exact::solve_dp(problem) : exact::solve_bruteforce(problem);
    report.solver = algo;
    report.tour = res.tour;
    report.objective = res.objective;
    report.initial_objective = res.objective;
    report.iterations = static_cast<long>(res.nodes_expanded);
    report.config = nlohmann::json::object();
  } else if (algo == "greedy") {
    report.solver = algo;
    report.tour = alns::initial_solution(problem.candidates(), problem.costs());
    report.objective = problem.evaluate(report.tour);
    report.initial_objective = report.objective;
    report.iterations = problem.num_tasks();
    report.config = nlohmann::json::object();
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown solver '" + algo + "'");
  }
  report.seed = options.seed;
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

double gap_pct(double objective, double baseline) noexcept {
  return (objective - baseline) / baseline * 100.0;
}

BenchmarkSummary run_benchmark(const std::vector<DatasetRecord>& records,
                               const std::vector<std::string>& algos, const std::string& baseline,
                               const SolveOptions& options, int jobs) {
  std::vector<std::string> run = algos;
  if (std::find(run.begin(), run.end(), baseline) == run.end()) {
    run.push_back(baseline);
  }
  for (const auto& a : run) {
    if (std::find(solver_names().begin(), solver_names().end(), a) == solver_names().end()) {
      throw Error(ErrorCode::kInvalidArgument, "unknown solver '" + a + "'");
    }
  }
  if (jobs < 1) {
    throw Error(ErrorCode::kInvalidArgument, "jobs must be >= 1");
  }

  std::vector<Problem> problems;
  problems.reserve(records.size());
  for (const auto& r : records) problems.emplace_back(r.instance);

  std::vector<Job> work;
  for (std::size_t i = 0; i < records.size(); ++i)
    for (std::size_t a = 0; a < run.size(); ++a) work.push_back({i, a});
  std::vector<SolverReport> reports(work.size());
  std::vector<std::exception_ptr> errors(work.size());

  auto worker = [&](std::atomic<std::size_t>& next) {
    for (std::size_t w = next++; w < work.size(); w = next++) {
      try {
        reports[w] = solve(problems[work[w].record], run[work[w].algo], options);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    }
  };
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    const auto n = std::min<std::size_t>(static_cast<std::size_t>(jobs), std::max<std::size_t>(work.size(), 1));
    for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker, std::ref(next));
    worker(next);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  const std::size_t base_idx =
      static_cast<std::size_t>(std::find(run.begin(), run.end(), baseline) - run.begin());
  BenchmarkSummary summary;
  summary.baseline = baseline;
  for (std::size_t w = 0; w < work.size(); ++w) {
    const auto& rep = reports[w];
    const double base = reports[work[w].record * run.size() + base_idx].objective;
    summary.rows.push_back({records[work[w].record].id, run[work[w].algo], rep.objective,
                            gap_pct(rep.objective, base), rep.wall_time_s, rep.seed});
  }
  std::stable_sort(summary.rows.begin(), summary.rows.end(), [](const auto& a, const auto& b) {
    return std::tie(a.instance_id, a.solver) < std::tie(b.instance_id, b.solver);
  });

  for (const auto& a : run) {
    SolverSummary s{a};
    for (const auto& row : summary.rows) {
      if (row.solver != a) continue;
      ++s.instances;
      s.mean_objective += row.objective;
      s.mean_gap_pct += row.gap_pct;
      s.total_time_s += row.time_s;
    }
    if (s.instances > 0) {
      s.mean_objective /= s.instances;
      s.mean_gap_pct /= s.instances;
    }
    summary.solvers.push_back(s);
  }
  return summary;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string to_csv(const std::vector<BenchRow>& rows) {
  std::string out = "instance_id,solver,objective,gap_pct,time_s,seed\r\n";
  for (const auto& r : rows) {
    out += csv_field(r.instance_id) + ',' + csv_field(r.solver) + ',' + format_double(r.objective) +
           ',' + format_double(r.gap_pct) + ',' + format_double(r.time_s) + ',' +
           std::to_string(r.seed) + "\r\n";
  }
  return out;
}

nlohmann::json to_json(const BenchmarkSummary& summary, bool include_timing) {
  nlohmann::json solvers = nlohmann::json::array();
  for (const auto& s : summary.solvers) {
    nlohmann::json j = {{"solver", s.solver},
                        {"instances", s.instances},
                        {"mean_objective", s.mean_objective},
                        {"mean_gap_pct", s.mean_gap_pct}};
    if (include_timing) j["total_time_s"] = s.total_time_s;
    solvers.push_back(std::move(j));
  }
  return {{"baseline", summary.baseline}, {"solvers", std::move(solvers)}};
}

}  // namespace cgrp::harness
