#include "cgrp/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <optional>

#include "cgrp/error.hpp"
#include "cgrp/rng.hpp"

namespace cgrp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSweepSnap = 1e-9;

// Per-purpose stream identifiers for generate_instance.
enum Stream : std::uint64_t {
  kComposition = 1,
  kDepot = 2,
  kAreas = 3,
  kLines = 4,
  kPoints = 5,
};

// Attempts to place one anchor before the whole instance is redrawn.
constexpr int kAnchorTries = 2000;
// Area anchors keep this many γ from the border, enough for the smallest
// admissible rectangle (4γ × 3γ) at any orientation.
constexpr double kAreaMargin = 2.5;
// Attempts to fit one rectangle (width, orientation) inside the unit square.
constexpr int kRectangleTries = 100;

Vec2 uniform_point(Rng& rng, double margin = 0.0) {
  const double x = rng.uniform(margin, 1.0 - margin);
  const double y = rng.uniform(margin, 1.0 - margin);
  return {x, y};
}

bool separated(Vec2 p, const std::vector<Vec2>& anchors, double min_sep) {
  return std::all_of(anchors.begin(), anchors.end(),
                     [&](Vec2 q) { return distance(p, q) >= min_sep; });
}

std::optional<Vec2> sample_anchor(Rng& rng, const std::vector<Vec2>& anchors, double min_sep,
                                  double margin = 0.0) {
  for (int t = 0; t < kAnchorTries; ++t) {
    const Vec2 p = uniform_point(rng, margin);
    if (separated(p, anchors, min_sep)) {
      return p;
    }
  }
  return std::nullopt;
}

bool fits(const AreaTask& area) {
  const auto cs = area.corners();
  return std::all_of(cs.begin(), cs.end(), [](Vec2 c) { return in_unit_square(c); });
}

// Common long-side length of all areas: the smallest pairwise anchor
// distance, floored at 4γ; a lone area gets 8γ.
double area_length(const std::vector<Vec2>& area_anchors, double gamma) {
  if (area_anchors.size() < 2) {
    return 8.0 * gamma;
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < area_anchors.size(); ++i) {
    for (std::size_t j = i + 1; j < area_anchors.size(); ++j) {
      best = std::min(best, distance(area_anchors[i], area_anchors[j]));
    }
  }
  return std::max(best, 4.0 * gamma);
}

struct Composition {
  int n_areas;
  int n_lines;
  int n_points;
};

std::optional<Instance> attempt(const InstanceSpec& spec, const Composition& comp, Vec2 depot,
                                Rng& area_rng, Rng& line_rng, Rng& point_rng) {
  const double gamma = spec.detection_range;
  const double sep = spec.min_anchor_separation;
  Instance inst;
  inst.depot = depot;
  inst.omega = spec.omega;
  inst.gamma = gamma;

  std::vector<Vec2> anchors;
  anchors.reserve(static_cast<std::size_t>(comp.n_areas + comp.n_lines + comp.n_points));

  for (int i = 0; i < comp.n_areas; ++i) {
    auto a = sample_anchor(area_rng, anchors, sep, kAreaMargin * gamma);
    if (!a) {
      return std::nullopt;
    }
    anchors.push_back(*a);
  }
  const double length = area_length(anchors, gamma);
  for (int i = 0; i < comp.n_areas; ++i) {
    AreaTask area;
    area.anchor = anchors[static_cast<std::size_t>(i)];
    area.length = length;
    area.detection_range = gamma;
    bool placed = false;
    for (int t = 0; t < kRectangleTries && !placed; ++t) {
      area.width = area_rng.uniform(3.0 * gamma, length);
      area.beta = area_rng.uniform(0.0, kPi);
      placed = fits(area);
    }
    if (!placed) {
      return std::nullopt;
    }
    inst.areas.push_back(area);
  }

  for (int i = 0; i < comp.n_lines; ++i) {
    bool placed = false;
    for (int t = 0; t < kAnchorTries && !placed; ++t) {
      const Vec2 mid = uniform_point(line_rng);
      const double len = line_rng.uniform(spec.line_length_range.lo, spec.line_length_range.hi);
      const double theta = line_rng.uniform(0.0, kPi);
      const Vec2 half{0.5 * len * std::cos(theta), 0.5 * len * std::sin(theta)};
      const LineTask line{mid - half, mid + half};
      if (in_unit_square(line.p1) && in_unit_square(line.p2) && separated(mid, anchors, sep)) {
        inst.lines.push_back(line);
        anchors.push_back(mid);
        placed = true;
      }
    }
    if (!placed) {
      return std::nullopt;
    }
  }

  for (int i = 0; i < comp.n_points; ++i) {
    auto p = sample_anchor(point_rng, anchors, sep);
    if (!p) {
      return std::nullopt;
    }
    anchors.push_back(*p);
    inst.points.push_back({*p});
  }
  return inst;
}

}  // namespace

Vec2 AreaTask::corner(int sx, int sy) const noexcept {
  const Vec2 u{std::cos(beta), std::sin(beta)};
  const Vec2 v{-u.y, u.x};
  return anchor + (0.5 * sx * length) * u + (0.5 * sy * width) * v;
}

std::array<Vec2, 4> AreaTask::corners() const noexcept {
  return {corner(-1, -1), corner(-1, 1), corner(1, -1), corner(1, 1)};
}

std::string InstanceSpec::validate() const {
  auto empty = [](IntRange r) { return r.lo >= r.hi; };
  if (empty(size_range) || size_range.lo < 1) {
    return "size_range must be a non-empty interval with lo >= 1";
  }
  if (empty(area_range) || area_range.lo < 0) {
    return "area_range must be a non-empty interval with lo >= 0";
  }
  if (empty(line_range) || line_range.lo < 0) {
    return "line_range must be a non-empty interval with lo >= 0";
  }
  if (omega < 1) {
    return "omega must be >= 1";
  }
  if (!(detection_range > 0.0)) {
    return "detection_range must be > 0";
  }
  if (!(min_anchor_separation >= 0.0)) {
    return "min_anchor_separation must be >= 0";
  }
  if (!(line_length_range.lo > 0.0) || !(line_length_range.lo < line_length_range.hi)) {
    return "line_length_range must be a non-empty interval with lo > 0";
  }
  if (max_attempts < 1) {
    return "max_attempts must be >= 1";
  }
  return {};
}

Instance generate_instance(const InstanceSpec& spec, std::uint64_t seed) {
  if (auto why = spec.validate(); !why.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "invalid instance spec: " + why);
  }

  Rng comp_rng(derive_seed(seed, kComposition));
  const int n = comp_rng.uniform_int(spec.size_range.lo, spec.size_range.hi);
  const int n_areas = std::min(n, comp_rng.uniform_int(spec.area_range.lo, spec.area_range.hi));
  const int n_lines =
      std::min(n - n_areas, comp_rng.uniform_int(spec.line_range.lo, spec.line_range.hi));
  const Composition comp{n_areas, n_lines, n - n_areas - n_lines};

  Rng depot_rng(derive_seed(seed, kDepot));
  const Vec2 depot = uniform_point(depot_rng);

  Rng area_rng(derive_seed(seed, kAreas));
  Rng line_rng(derive_seed(seed, kLines));
  Rng point_rng(derive_seed(seed, kPoints));
  for (int a = 0; a < spec.max_attempts; ++a) {
    if (auto inst = attempt(spec, comp, depot, area_rng, line_rng, point_rng)) {
      inst->seed = seed;
      return *std::move(inst);
    }
  }
  throw Error(ErrorCode::kGenerationFailure,
              "could not place " + std::to_string(n) + " tasks with separation " +
                  std::to_string(spec.min_anchor_separation) + " after " +
                  std::to_string(spec.max_attempts) + " attempts");
}

ZigzagParams zigzag_params(const AreaTask& area) noexcept {
  const double ratio = area.width / area.detection_range;
  const double nearest = std::round(ratio);
  const double snapped = std::abs(ratio - nearest) <= kSweepSnap ? nearest : std::floor(ratio);
  const int n_sweep = static_cast<int>(snapped) + 1;
  return {n_sweep, n_sweep * area.length};
}

std::array<EntryExitPair, 4> area_entry_exit_pairs(const AreaTask& area) {
  const ZigzagParams zz = zigzag_params(area);
  const bool even = zz.n_sweep % 2 == 0;
  std::array<EntryExitPair, 4> pairs;
  constexpr std::array<std::pair<int, int>, 4> kOrder{{{-1, -1}, {-1, 1}, {1, -1}, {1, 1}}};
  for (std::size_t k = 0; k < kOrder.size(); ++k) {
    const auto [sx, sy] = kOrder[k];
    // The sweep always finishes on the far long edge; parity decides the short edge.
    pairs[k] = {area.corner(sx, sy), area.corner(even ? sx : -sx, -sy), zz.path_length};
  }
  return pairs;
}

double normalize_orientation(double angle) noexcept {
  double r = std::fmod(angle, kPi);
  if (r < 0.0) {
    r += kPi;
  }
  if (r >= kPi) {
    r = 0.0;
  }
  return r;
}

RigidTransform RigidTransform::from_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must lie in [0, 1)");
  }
  if (alpha < 0.5) {
    return {4.0 * kPi * alpha, false};
  }
  return {4.0 * kPi * (alpha - 0.5), true};
}

Vec2 RigidTransform::apply(Vec2 p) const noexcept {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  const double dx = p.x - 0.5;
  const double dy = p.y - 0.5;
  const Vec2 r{c * dx - s * dy + 0.5, s * dx + c * dy + 0.5};
  return swap_axes ? Vec2{r.y, r.x} : r;
}

Vec2 RigidTransform::apply_inverse(Vec2 p) const noexcept {
  const Vec2 q = swap_axes ? Vec2{p.y, p.x} : p;
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  const double dx = q.x - 0.5;
  const double dy = q.y - 0.5;
  return {c * dx + s * dy + 0.5, -s * dx + c * dy + 0.5};
}

double RigidTransform::apply_orientation(double beta) const noexcept {
  const double rotated = beta + phi;
  // Swapping axes reflects across y = x, sending direction θ to π/2 − θ.
  return normalize_orientation(swap_axes ? 0.5 * kPi - rotated : rotated);
}

namespace {

template <typename PointMap, typename AngleMap>
Instance map_instance(const Instance& in, PointMap&& map_point, AngleMap&& map_angle) {
  Instance out = in;
  out.depot = map_point(in.depot);
  for (auto& p : out.points) {
    p.loc = map_point(p.loc);
  }
  for (auto& l : out.lines) {
    l.p1 = map_point(l.p1);
    l.p2 = map_point(l.p2);
  }
  for (auto& a : out.areas) {
    a.anchor = map_point(a.anchor);
    a.beta = map_angle(a.beta);
  }
  return out;
}

}  // namespace

Instance rotate_reflect(const Instance& instance, double alpha) {
  const RigidTransform t = RigidTransform::from_alpha(alpha);
  Instance out = map_instance(
      instance, [&](Vec2 p) { return t.apply(p); },
      [&](double b) { return t.apply_orientation(b); });
  out.unit_square_relaxed = instance.unit_square_relaxed || t.phi != 0.0 || t.swap_axes;
  return out;
}

Instance rotate_reflect_inverse(const Instance& instance, double alpha) {
  const RigidTransform t = RigidTransform::from_alpha(alpha);
  return map_instance(
      instance, [&](Vec2 p) { return t.apply_inverse(p); },
      [&](double b) {
        const double unswapped = t.swap_axes ? 0.5 * kPi - b : b;
        return normalize_orientation(unswapped - t.phi);
      });
}

std::vector<Instance> augment_views(const Instance& instance, int num_views, std::uint64_t seed) {
  if (num_views < 1) {
    throw Error(ErrorCode::kInvalidArgument, "num_views must be >= 1");
  }
  std::vector<Instance> views;
  views.reserve(static_cast<std::size_t>(num_views));
  views.push_back(instance);
  Rng rng(seed);
  for (int v = 1; v < num_views; ++v) {
    views.push_back(rotate_reflect(instance, rng.uniform()));
  }
  return views;
}

double min_anchor_distance(const Instance& instance) {
  std::vector<Vec2> anchors;
  for (const auto& a : instance.areas) anchors.push_back(a.anchor);
  for (const auto& l : instance.lines) anchors.push_back(l.midpoint());
  for (const auto& p : instance.points) anchors.push_back(p.loc);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    for (std::size_t j = i + 1; j < anchors.size(); ++j) {
      best = std::min(best, distance(anchors[i], anchors[j]));
    }
  }
  return best;
}

std::vector<std::string> check_instance(const Instance& instance) {
  constexpr double kTol = 1e-12;
  std::vector<std::string> issues;
  const bool bounded = !instance.unit_square_relaxed;
  auto where = [](const char* kind, std::size_t i) {
    return std::string(kind) + "[" + std::to_string(i) + "]";
  };
  if (instance.num_tasks() < 1) {
    issues.emplace_back("instance has no tasks");
  }
  if (instance.omega < 1) {
    issues.emplace_back("omega must be >= 1");
  }
  if (bounded && !in_unit_square(instance.depot, kTol)) {
    issues.emplace_back("depot outside unit square");
  }
  for (std::size_t i = 0; i < instance.points.size(); ++i) {
    if (bounded && !in_unit_square(instance.points[i].loc, kTol)) {
      issues.push_back(where("point", i) + " outside unit square");
    }
  }
  for (std::size_t i = 0; i < instance.lines.size(); ++i) {
    const auto& l = instance.lines[i];
    if (!(l.length() > 0.0)) {
      issues.push_back(where("line", i) + " has coincident endpoints");
    }
    if (bounded && !(in_unit_square(l.p1, kTol) && in_unit_square(l.p2, kTol))) {
      issues.push_back(where("line", i) + " outside unit square");
    }
  }
  for (std::size_t i = 0; i < instance.areas.size(); ++i) {
    const auto& a = instance.areas[i];
    if (!(a.detection_range > 0.0)) {
      issues.push_back(where("area", i) + " has non-positive detection range");
    }
    if (a.width < 3.0 * a.detection_range - kTol) {
      issues.push_back(where("area", i) + " narrower than three detection ranges");
    }
    if (!(a.width < a.length)) {
      issues.push_back(where("area", i) + " width not below length");
    }
    if (bounded) {
      const auto cs = a.corners();
      if (!std::all_of(cs.begin(), cs.end(), [&](Vec2 c) { return in_unit_square(c, kTol); })) {
        issues.push_back(where("area", i) + " corner outside unit square");
      }
    }
  }
  return issues;
}

}  // namespace cgrp
