#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cgrp/costmodel.hpp"
#include "cgrp/report.hpp"
#include "cgrp/rng.hpp"

namespace cgrp::altopt {

struct AltOptConfig {
  int restarts = 20;
  int alternations_per_restart = 3;
  int refine_passes = 5;
  /// Noise amplitude reached by the last restart is about this value.
  double randomization_scale = 0.5;
  /// Restarts run on up to this many threads; results do not depend on it.
  int workers = 1;
  std::uint64_t seed = 0;

  [[nodiscard]] std::string validate() const;
};

/// Multiplicative score-noise amplitude of restart r: r · scale / restarts.
[[nodiscard]] double restart_noise_amplitude(const AltOptConfig& config, int restart_index) noexcept;

struct Construction {
  Tour tour;
  double noise_amplitude = 0.0;
};

/// Greedy nearest-candidate construction. Restart 0 is noise-free and equals
/// alns::initial_solution; later restarts scale each candidate's greedy score
/// by (1 + a·u), u ~ U(−1, 1), with a = restart_noise_amplitude.
[[nodiscard]] Construction construct_route(const CandidateSet& cs, const CostMatrix& cm,
                                           const AltOptConfig& config, int restart_index,
                                           Rng& rng);

struct ImproveStats {
  long or_opt_moves = 0;
  long three_opt_moves = 0;
};

/// First-improvement local search over orientation-preserving moves: Or-opt
/// relocation of 1–3 consecutive candidates, then directed 3-opt exchange of
/// two adjacent segments. Scans position-major, segment-length-minor and
/// stops at a local optimum. Candidate choices are left untouched.
[[nodiscard]] Tour improve_route_asymmetric(const Tour& tour, const CostMatrix& cm);
[[nodiscard]] Tour improve_route_asymmetric(const Tour& tour, const CostMatrix& cm,
                                            ImproveStats& stats);

/// Same algorithm as node_choice_optimization.
[[nodiscard]] Tour refine_node_choices(const Tour& tour, const CandidateSet& cs,
                                       const CostMatrix& cm, int passes);

/// `trace` holds the best objective of each restart, in restart order.
[[nodiscard]] SolverReport run(const Problem& problem, const AltOptConfig& config);

[[nodiscard]] nlohmann::json to_json(const AltOptConfig& config);
[[nodiscard]] AltOptConfig config_from_json(const nlohmann::json& j, AltOptConfig base = {});

}  // namespace cgrp::altopt
