#include "cgrp/report.hpp"

namespace cgrp {

nlohmann::json to_json(const SolverReport& report, bool include_timing) {
  nlohmann::json j = {
      {"solver", report.solver},
      {"instance_id", report.instance_id},
      {"objective", report.objective},
      {"initial_objective", report.initial_objective},
      {"tour", report.tour.order},
      {"iterations", report.iterations},
      {"seed", report.seed},
      {"config", report.config.is_null() ? nlohmann::json::object() : report.config},
      {"trace", report.trace},
  };
  if (include_timing) {
    j["wall_time_s"] = report.wall_time_s;
  }
  return j;
}

}  // namespace cgrp
