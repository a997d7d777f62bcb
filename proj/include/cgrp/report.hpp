#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "cgrp/costmodel.hpp"

namespace cgrp {

/// Outcome of one solver run on one instance.
struct SolverReport {
  std::string solver;
  std::string instance_id;
  double objective = 0.0;
  Tour tour;
  double wall_time_s = 0.0;
  long iterations = 0;
  std::uint64_t seed = 0;
  nlohmann::json config;
  /// Solver-specific progress record, e.g. best objective per iteration.
  std::vector<double> trace;
  double initial_objective = 0.0;
};

/// Full report document. `include_timing = false` drops wall_time_s so two
/// runs can be compared for bit-identity.
[[nodiscard]] nlohmann::json to_json(const SolverReport& report, bool include_timing = true);

}  // namespace cgrp
