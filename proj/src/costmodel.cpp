#include "cgrp/costmodel.hpp"

#include <algorithm>
#include <sstream>

#include "cgrp/error.hpp"

namespace cgrp {

CandidateSet::CandidateSet(std::vector<Candidate> candidates, int n_areas, int n_lines,
                           int n_points, int omega)
  : _candidates(std::move(candidates)),
    _n_areas(n_areas),
    _n_lines(n_lines),
    _n_points(n_points),
    _omega(omega) {
  _task_of.reserve(_candidates.size());
  _siblings.resize(static_cast<std::size_t>(num_tasks()));
  for (std::size_t i = 0; i < _candidates.size(); ++i) {
    const int t = _candidates[i].task_id;
    _task_of.push_back(t);
    if (t >= 0) {
      _siblings[static_cast<std::size_t>(t)].push_back(static_cast<int>(i));
    }
  }
}

CostMatrix::CostMatrix(const CandidateSet& cs) : _n(cs.size()), _d(_n * _n) {
  for (std::size_t i = 0; i < _n; ++i) {
    for (std::size_t j = 0; j < _n; ++j) {
      _d[i * _n + j] = travel_cost(cs[i], cs[j]);
    }
  }
}

double travel_cost(const Candidate& from, const Candidate& to) noexcept {
  return distance(from.exit, to.entry);
}

CandidateSet expand_candidates(const Instance& instance) {
  if (instance.num_areas() > 0 && instance.omega != kAreaPairs) {
    throw Error(ErrorCode::kUnsupportedOmega,
                "rectangular areas yield " + std::to_string(kAreaPairs) +
                    " entry-exit pairs, instance requests omega=" +
                    std::to_string(instance.omega));
  }
  const int omega = instance.num_areas() > 0 ? instance.omega : kAreaPairs;
  std::vector<Candidate> out;
  out.reserve(static_cast<std::size_t>(1 + omega * instance.num_areas() +
                                       2 * instance.num_lines() + instance.num_points()));

  auto push = [&](int task, TaskType type, Vec2 entry, Vec2 exit, double cost, Vec2 anchor) {
    out.push_back({static_cast<int>(out.size()), task, type, entry, exit, cost, anchor});
  };

  push(kNoTask, TaskType::kDepot, instance.depot, instance.depot, 0.0, instance.depot);
  int task = 0;
  for (const auto& area : instance.areas) {
    for (const auto& pair : area_entry_exit_pairs(area)) {
      push(task, TaskType::kArea, pair.entry, pair.exit, pair.service_cost, area.anchor);
    }
    ++task;
  }
  for (const auto& line : instance.lines) {
    const double len = line.length();
    push(task, TaskType::kLine, line.p1, line.p2, len, line.midpoint());
    push(task, TaskType::kLine, line.p2, line.p1, len, line.midpoint());
    ++task;
  }
  for (const auto& point : instance.points) {
    push(task, TaskType::kPoint, point.loc, point.loc, 0.0, point.loc);
    ++task;
  }
  return CandidateSet(std::move(out), instance.num_areas(), instance.num_lines(),
                      instance.num_points(), omega);
}

bool ValidationResult::has(ViolationKind kind) const noexcept {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.kind == kind; });
}

std::string ValidationResult::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    os << (i ? "; " : "") << violations[i].message;
  }
  return os.str();
}

ValidationResult validate_tour(const Tour& tour, const CandidateSet& cs) {
  ValidationResult result;
  auto add = [&](ViolationKind kind, int position, int task, std::string message) {
    result.violations.push_back({kind, position, task, std::move(message)});
  };

  const auto& order = tour.order;
  const int n_tasks = cs.num_tasks();
  if (order.empty() || order.front() != kDepotIndex) {
    add(ViolationKind::kDepot, 0, kNoTask, "depot: tour must start at candidate 0");
  }
  if (static_cast<int>(order.size()) != n_tasks + 1) {
    add(ViolationKind::kLength, -1, kNoTask,
        "length: expected " + std::to_string(n_tasks + 1) + " entries, got " +
            std::to_string(order.size()));
  }

  std::vector<int> seen(static_cast<std::size_t>(n_tasks), 0);
  for (std::size_t pos = 1; pos < order.size(); ++pos) {
    const int c = order[pos];
    const int p = static_cast<int>(pos);
    if (c < 0 || c >= static_cast<int>(cs.size())) {
      add(ViolationKind::kUnknownCandidate, p, kNoTask,
          "unknown candidate " + std::to_string(c) + " at position " + std::to_string(pos));
      continue;
    }
    if (c == kDepotIndex) {
      add(ViolationKind::kDepot, p, kNoTask,
          "depot: revisited at position " + std::to_string(pos));
      continue;
    }
    const int t = cs.task_of(c);
    if (++seen[static_cast<std::size_t>(t)] == 2) {
      add(ViolationKind::kDuplicateTask, p, t, "duplicate task " + std::to_string(t));
    }
  }
  for (int t = 0; t < n_tasks; ++t) {
    if (seen[static_cast<std::size_t>(t)] == 0) {
      add(ViolationKind::kMissingTask, -1, t, "missing task " + std::to_string(t));
    }
  }
  return result;
}

double tour_cost(std::span<const int> order, const CandidateSet& cs, const CostMatrix& cm) noexcept {
  if (order.empty()) {
    return 0.0;
  }
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    total += cm(order[i], order[i + 1]);
  }
  total += cm(order.back(), order.front());
  for (const int c : order) {
    total += cs.service_cost(c);
  }
  return total;
}

double evaluate_tour(const Tour& tour, const CandidateSet& cs, const CostMatrix& cm) {
  if (const auto v = validate_tour(tour, cs); !v.ok()) {
    throw Error(ErrorCode::kInvalidTour, "invalid tour: " + v.summary());
  }
  return tour_cost(tour.order, cs, cm);
}

CandidateSet rotate_reflect(const CandidateSet& cs, double alpha) {
  const RigidTransform t = RigidTransform::from_alpha(alpha);
  std::vector<Candidate> out(cs.candidates().begin(), cs.candidates().end());
  for (auto& c : out) {
    c.entry = t.apply(c.entry);
    c.exit = t.apply(c.exit);
    c.anchor = t.apply(c.anchor);
  }
  return CandidateSet(std::move(out), cs.num_areas(), cs.num_lines(), cs.num_points(), cs.omega());
}

}  // namespace cgrp
