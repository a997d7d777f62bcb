#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cgrp/alns.hpp"
#include "cgrp/altopt.hpp"
#include "cgrp/instance_io.hpp"
#include "cgrp/report.hpp"

namespace cgrp::harness {

inline constexpr int kManifestVersion = 1;

[[nodiscard]] const std::vector<std::string>& preset_names();
/// Throws Error{kInvalidArgument} for an unknown name.
[[nodiscard]] InstanceSpec preset_spec(const std::string& name);

/// Instance k is generate_instance(spec, seed + k) with id "<prefix>-<k>",
/// k zero-padded to six digits.
[[nodiscard]] std::vector<DatasetRecord> generate_dataset(const InstanceSpec& spec, int count,
                                                          std::uint64_t seed,
                                                          const std::string& prefix);

[[nodiscard]] nlohmann::json dataset_manifest(const std::string& source, const InstanceSpec& spec,
                                              int count, std::uint64_t seed);

/// Path of the manifest written next to a dataset file.
[[nodiscard]] std::filesystem::path manifest_path(const std::filesystem::path& dataset);

[[nodiscard]] const std::vector<std::string>& solver_names();

struct SolveOptions {
  alns::AlnsConfig alns;
  altopt::AltOptConfig altopt;
  /// Overrides the seed of whichever stochastic solver runs.
  std::uint64_t seed = 0;
};

/// Reads an optional {"alns": {...}, "altopt": {...}} document.
[[nodiscard]] SolveOptions options_from_json(const nlohmann::json& j, SolveOptions base = {});

/// Runs one named solver. Timing covers the solver call only.
/// Throws Error{kInvalidArgument} for an unknown name; exact guards propagate.
[[nodiscard]] SolverReport solve(const Problem& problem, const std::string& algo,
                                 const SolveOptions& options);

/// (Obj − Base) / Base × 100.
[[nodiscard]] double gap_pct(double objective, double baseline) noexcept;

struct BenchRow {
  std::string instance_id;
  std::string solver;
  double objective = 0.0;
  double gap_pct = 0.0;
  double time_s = 0.0;
  std::uint64_t seed = 0;
};

struct SolverSummary {
  std::string solver;
  int instances = 0;
  double mean_objective = 0.0;
  double mean_gap_pct = 0.0;
  double total_time_s = 0.0;
};

struct BenchmarkSummary {
  std::string baseline;
  std::vector<SolverSummary> solvers;  ///< in the order requested
  std::vector<BenchRow> rows;          ///< sorted by (instance_id, solver)
};

/// Runs every algo (plus the baseline if absent) on every record with up to
/// `jobs` concurrent solver runs. The result does not depend on `jobs`
/// except for timing.
[[nodiscard]] BenchmarkSummary run_benchmark(const std::vector<DatasetRecord>& records,
                                             const std::vector<std::string>& algos,
                                             const std::string& baseline,
                                             const SolveOptions& options, int jobs);

/// RFC-4180 text with header instance_id,solver,objective,gap_pct,time_s,seed.
[[nodiscard]] std::string to_csv(const std::vector<BenchRow>& rows);
[[nodiscard]] std::string csv_field(const std::string& s);
/// Shortest text that parses back to exactly `v`.
[[nodiscard]] std::string format_double(double v);

[[nodiscard]] nlohmann::json to_json(const BenchmarkSummary& summary, bool include_timing = true);

}  // namespace cgrp::harness
