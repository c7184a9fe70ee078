#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arbor/geometry.hpp"

namespace arbor {

/// Thrown when a greedy step is asked to process a point at or below a time
/// line that has already been swept.
class SweepOrderError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Per-column topmost y placed so far (0 for an empty column). Sufficient
/// state for a greedy step: a box reaching below a column's top always has
/// that top point on its boundary.
class Frontier {
 public:
  explicit Frontier(int n);

  int n() const noexcept { return static_cast<int>(top_.size()); }
  /// 0 if nothing has been placed in column x yet.
  std::int32_t top(int x) const { return top_.at(static_cast<std::size_t>(x - 1)); }
  /// Largest y placed anywhere, 0 initially.
  std::int32_t sweep_line() const noexcept { return line_; }

  /// Records a placed point; y must not be below the sweep line.
  void place(Point p);

 private:
  friend std::vector<Point> greedy_step(const Frontier&, Point);

  std::vector<std::int32_t> top_;
  std::vector<std::int32_t> top_mirror_;  // top_ reversed, for leftward scans
  std::int32_t line_ = 0;
};

/// The points GreedyArb places on line p.y when p arrives, sorted by x:
/// the strict staircase maxima of the column tops on each side of p.
/// Throws SweepOrderError unless p.y is above the frontier's sweep line.
std::vector<Point> greedy_step(const Frontier& frontier, Point p);

struct GreedyStep {
  Point access;
  std::vector<Point> added;    // all on line access.y, sorted by x
  std::vector<Point> parents;  // parents[i] is the base point in added[i]'s column
};

/// Full record of one GreedyArb sweep. Step t lives at `steps[t - 1]`.
struct GreedyTrace {
  Instance instance;
  std::vector<GreedyStep> steps;

  const GreedyStep& step(int t) const { return steps.at(static_cast<std::size_t>(t - 1)); }
  /// Every added point, sorted by (x, y).
  std::vector<Point> added_points() const;
  AugmentedSet augmented() const;
  /// Added points whose same-column base point is not strictly below them.
  /// Always empty on a permutation instance; kept as a checked invariant.
  std::vector<Point> parent_violations() const;
};

GreedyTrace run(const Instance& instance);

std::int64_t added_count(const GreedyTrace& trace);

/// {"n", "access", "steps": [{"t", "added_x"}], "instance_hash"}
std::string trace_to_json(const GreedyTrace& trace);
GreedyTrace trace_from_json(std::string_view text);

/// Header "t,access_key,num_added,cumulative_added", one row per time.
std::string trace_to_csv(const GreedyTrace& trace);

}  // namespace arbor
