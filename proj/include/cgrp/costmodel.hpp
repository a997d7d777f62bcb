#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cgrp/geometry.hpp"

namespace cgrp {

/// Task-type indicator; the numeric values are the encoding fed to models.
enum class TaskType : int { kArea = 0, kLine = 1, kPoint = 2, kDepot = 3 };

inline constexpr int kDepotIndex = 0;
inline constexpr int kNoTask = -1;
inline constexpr int kAreaPairs = 4;

/// Absolute tolerance for objective comparisons in solvers.
inline constexpr double kCostEps = 1e-9;

struct Candidate {
  int index = 0;
  int task_id = kNoTask;
  TaskType type = TaskType::kDepot;
  Vec2 entry;
  Vec2 exit;
  double service_cost = 0.0;
  Vec2 anchor;
};

/// All candidates of an instance, depot first, then ω per area task, two per
/// line task (p1→p2, then p2→p1) and one per point task.
///
/// Task ids number areas first, then lines, then points.
class CandidateSet {
 public:
  CandidateSet() = default;
  CandidateSet(std::vector<Candidate> candidates, int n_areas, int n_lines, int n_points, int omega);

  [[nodiscard]] std::size_t size() const noexcept { return _candidates.size(); }
  [[nodiscard]] const Candidate& operator[](std::size_t i) const { return _candidates[i]; }
  [[nodiscard]] std::span<const Candidate> candidates() const noexcept { return _candidates; }

  [[nodiscard]] int task_of(int candidate) const { return _task_of[static_cast<std::size_t>(candidate)]; }
  [[nodiscard]] std::span<const int> siblings(int task) const {
    return _siblings[static_cast<std::size_t>(task)];
  }
  [[nodiscard]] double service_cost(int candidate) const {
    return _candidates[static_cast<std::size_t>(candidate)].service_cost;
  }

  [[nodiscard]] int num_tasks() const noexcept { return _n_areas + _n_lines + _n_points; }
  [[nodiscard]] int num_areas() const noexcept { return _n_areas; }
  [[nodiscard]] int num_lines() const noexcept { return _n_lines; }
  [[nodiscard]] int num_points() const noexcept { return _n_points; }
  [[nodiscard]] int omega() const noexcept { return _omega; }

  /// First candidate index of each block.
  [[nodiscard]] int first_line_candidate() const noexcept { return 1 + _omega * _n_areas; }
  [[nodiscard]] int first_point_candidate() const noexcept {
    return first_line_candidate() + 2 * _n_lines;
  }

 private:
  std::vector<Candidate> _candidates;
  std::vector<int> _task_of;
  std::vector<std::vector<int>> _siblings;
  int _n_areas = 0;
  int _n_lines = 0;
  int _n_points = 0;
  int _omega = kAreaPairs;
};

/// Dense row-major |V|×|V| matrix of exit(i) → entry(j) distances.
class CostMatrix {
 public:
  CostMatrix() = default;
  explicit CostMatrix(const CandidateSet& cs);

  [[nodiscard]] std::size_t size() const noexcept { return _n; }
  [[nodiscard]] double operator()(int from, int to) const noexcept {
    return _d[static_cast<std::size_t>(from) * _n + static_cast<std::size_t>(to)];
  }

 private:
  std::size_t _n = 0;
  std::vector<double> _d;
};

/// Depot-anchored visiting sequence; the return to the depot is implicit.
struct Tour {
  std::vector<int> order;

  friend bool operator==(const Tour&, const Tour&) = default;
};

enum class ViolationKind { kDepot, kLength, kUnknownCandidate, kDuplicateTask, kMissingTask };

struct Violation {
  ViolationKind kind;
  int position = -1;  ///< index in the tour, or -1
  int task = kNoTask;
  std::string message;
};

struct ValidationResult {
  std::vector<Violation> violations;

  [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
  [[nodiscard]] bool has(ViolationKind kind) const noexcept;
  [[nodiscard]] std::string summary() const;
};

/// Throws Error{kUnsupportedOmega} when the instance has area tasks and
/// ω differs from the four entry–exit pairs a rectangle yields.
[[nodiscard]] CandidateSet expand_candidates(const Instance& instance);

[[nodiscard]] double travel_cost(const Candidate& from, const Candidate& to) noexcept;

[[nodiscard]] ValidationResult validate_tour(const Tour& tour, const CandidateSet& cs);

/// Travel along the closed tour plus service costs. Throws Error{kInvalidTour}.
[[nodiscard]] double evaluate_tour(const Tour& tour, const CandidateSet& cs, const CostMatrix& cm);

/// evaluate_tour without validation, for solver inner loops.
[[nodiscard]] double tour_cost(std::span<const int> order, const CandidateSet& cs,
                               const CostMatrix& cm) noexcept;

/// Candidate-level view transform: applies rotate_reflect(·, alpha) to every
/// entry, exit and anchor while preserving candidate indices.
[[nodiscard]] CandidateSet rotate_reflect(const CandidateSet& cs, double alpha);

/// An instance together with its candidate expansion and cost matrix.
class Problem {
 public:
  explicit Problem(Instance instance)
    : _instance(std::move(instance)), _cs(expand_candidates(_instance)), _cm(_cs) {}

  [[nodiscard]] const Instance& instance() const noexcept { return _instance; }
  [[nodiscard]] const CandidateSet& candidates() const noexcept { return _cs; }
  [[nodiscard]] const CostMatrix& costs() const noexcept { return _cm; }
  [[nodiscard]] int num_tasks() const noexcept { return _cs.num_tasks(); }

  [[nodiscard]] double evaluate(const Tour& tour) const { return evaluate_tour(tour, _cs, _cm); }

 private:
  Instance _instance;
  CandidateSet _cs;
  CostMatrix _cm;
};

}  // namespace cgrp
