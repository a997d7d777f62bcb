#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace cgrp {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) noexcept { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) noexcept = default;
};

[[nodiscard]] inline double distance(Vec2 a, Vec2 b) noexcept {
  return std::hypot(a.x - b.x, a.y - b.y);
}

[[nodiscard]] constexpr bool in_unit_square(Vec2 p, double tol = 0.0) noexcept {
  return p.x >= -tol && p.x <= 1.0 + tol && p.y >= -tol && p.y <= 1.0 + tol;
}

struct PointTask {
  Vec2 loc;

  friend bool operator==(const PointTask&, const PointTask&) = default;
};

struct LineTask {
  Vec2 p1;
  Vec2 p2;

  [[nodiscard]] double length() const noexcept { return distance(p1, p2); }
  [[nodiscard]] Vec2 midpoint() const noexcept { return 0.5 * (p1 + p2); }

  friend bool operator==(const LineTask&, const LineTask&) = default;
};

/// Rotated rectangle serviced by a boustrophedon sweep along its long side.
struct AreaTask {
  Vec2 anchor;             ///< rectangle center
  double length = 0.0;     ///< long side
  double width = 0.0;      ///< short side
  double beta = 0.0;       ///< orientation of the long side, radians
  double detection_range = 0.05;

  /// Corner at local offset (sx·length/2, sy·width/2), sx, sy ∈ {−1, +1}.
  [[nodiscard]] Vec2 corner(int sx, int sy) const noexcept;
  [[nodiscard]] std::array<Vec2, 4> corners() const noexcept;

  friend bool operator==(const AreaTask&, const AreaTask&) = default;
};

struct Instance {
  Vec2 depot;
  std::vector<PointTask> points;
  std::vector<LineTask> lines;
  std::vector<AreaTask> areas;
  int omega = 4;
  double gamma = 0.05;
  std::uint64_t seed = 0;
  /// Set by rotate_reflect: coordinates may lie outside the unit square.
  bool unit_square_relaxed = false;

  [[nodiscard]] int num_areas() const noexcept { return static_cast<int>(areas.size()); }
  [[nodiscard]] int num_lines() const noexcept { return static_cast<int>(lines.size()); }
  [[nodiscard]] int num_points() const noexcept { return static_cast<int>(points.size()); }
  [[nodiscard]] int num_tasks() const noexcept { return num_areas() + num_lines() + num_points(); }

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// Half-open integer interval [lo, hi).
struct IntRange {
  int lo = 0;
  int hi = 1;
};

struct RealRange {
  double lo = 0.0;
  double hi = 1.0;
};

struct InstanceSpec {
  IntRange size_range{20, 100};
  IntRange area_range{0, 5};
  IntRange line_range{0, 20};
  int omega = 4;
  double detection_range = 0.05;
  double min_anchor_separation = 0.1;
  RealRange line_length_range{0.05, 0.3};
  /// Whole-instance attempts before giving up with generation-failure.
  int max_attempts = 200;

  /// Empty when valid, otherwise a description of the first problem found.
  [[nodiscard]] std::string validate() const;
};

/// Number of parallel passes and total length of the zigzag sweep.
struct ZigzagParams {
  int n_sweep = 0;
  double path_length = 0.0;
};

struct EntryExitPair {
  Vec2 entry;
  Vec2 exit;
  double service_cost = 0.0;
};

/// Draws an instance; a pure function of (spec, seed).
/// Throws Error{kInvalidArgument} for an invalid spec and
/// Error{kGenerationFailure} once the rejection budget is spent.
[[nodiscard]] Instance generate_instance(const InstanceSpec& spec, std::uint64_t seed);

/// ⌊W/γ⌋ + 1 sweeps of length L. The quotient is snapped to the nearest
/// integer when within 1e−9 of it, so W = 3γ yields 4 sweeps despite rounding.
[[nodiscard]] ZigzagParams zigzag_params(const AreaTask& area) noexcept;

/// The four corner entries of the two short edges, each paired with the
/// corner where the sweep ends: the other corner of the same short edge
/// when the number of sweeps is even, the diagonally opposite corner when odd.
///
/// Pair k enters at corner(sx, sy) with (sx, sy) taken in the order
/// (−,−), (−,+), (+,−), (+,+).
[[nodiscard]] std::array<EntryExitPair, 4> area_entry_exit_pairs(const AreaTask& area);

/// Rigid transform about (½, ½) drawn by α ∈ [0, 1): rotation by
/// φ = 4πα (α < ½) or 4π(α − ½) (α ≥ ½), followed by an x/y swap when α ≥ ½.
struct RigidTransform {
  double phi = 0.0;
  bool swap_axes = false;

  [[nodiscard]] static RigidTransform from_alpha(double alpha);

  [[nodiscard]] Vec2 apply(Vec2 p) const noexcept;
  [[nodiscard]] Vec2 apply_inverse(Vec2 p) const noexcept;
  /// Orientation of a transformed undirected axis, normalized to [0, π).
  [[nodiscard]] double apply_orientation(double beta) const noexcept;
};

[[nodiscard]] Instance rotate_reflect(const Instance& instance, double alpha);

/// Inverse of rotate_reflect(·, alpha) on coordinates and orientations.
[[nodiscard]] Instance rotate_reflect_inverse(const Instance& instance, double alpha);

/// The original followed by num_views − 1 transformed copies with α ~ U(0, 1).
[[nodiscard]] std::vector<Instance> augment_views(const Instance& instance, int num_views,
                                                  std::uint64_t seed);

/// Type-invariant violations of an instance; empty means valid. The
/// unit-square checks are skipped for transformed instances.
[[nodiscard]] std::vector<std::string> check_instance(const Instance& instance);

/// Minimum pairwise distance between task anchors (point locations, line
/// midpoints, area centers); +∞ with fewer than two tasks.
[[nodiscard]] double min_anchor_distance(const Instance& instance);

/// Normalize an undirected orientation to [0, π).
[[nodiscard]] double normalize_orientation(double angle) noexcept;

}  // namespace cgrp
