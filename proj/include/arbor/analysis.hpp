#pragma once

// Instrumentation for the divide-and-conquer bound on GreedyArb.
//
// A partition splits a run of consecutive keys into a left block P and a
// right block Q. The checks below rebuild the staircases and column states the
// O(n log n) argument is phrased in, then test each inequality it relies on.

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arbor/geometry.hpp"
#include "arbor/greedy.hpp"

namespace arbor::analysis {

/// Inclusive key interval [lo, hi].
struct Region {
  int lo = 1;
  int hi = 1;

  bool contains(int x) const noexcept { return lo <= x && x <= hi; }
  int length() const noexcept { return hi - lo + 1; }
  friend constexpr auto operator<=>(const Region&, const Region&) = default;
};

/// Adjacent blocks P = p_block and Q = q_block. Lengths may differ by one
/// (odd splits put the extra key in P); bounds use k = the larger length.
struct Partition {
  Region p_block;
  Region q_block;

  int k() const noexcept { return std::max(p_block.length(), q_block.length()); }
  friend constexpr auto operator<=>(const Partition&, const Partition&) = default;
};

/// Throws PreconditionError unless the blocks are adjacent, non-empty,
/// within 1..n and differ in length by at most one.
Partition make_partition(int n, Region p_block, Region q_block);

/// Recursive halving of 1..n: a block of m >= 2 keys splits into its first
/// ceil(m/2) and last floor(m/2) keys. Sorted by block range.
std::vector<Partition> dyadic_partitions(int n);

/// Every pair of adjacent equal-length blocks inside 1..n.
std::vector<Partition> all_half_partitions(int n);

/// Column and line lookups over a trace, built once and shared by the checks.
class TraceIndex {
 public:
  explicit TraceIndex(const GreedyTrace& trace);

  const GreedyTrace& trace() const noexcept { return *trace_; }
  int n() const noexcept { return trace_->instance.n(); }
  /// y-coordinates of every point in column x, ascending.
  std::span<const std::int32_t> column(int x) const { return columns_.at(static_cast<std::size_t>(x - 1)); }
  /// x-coordinates of every point on line y (access and added), ascending.
  std::span<const std::int32_t> line(int y) const { return lines_.at(static_cast<std::size_t>(y - 1)); }
  /// Added points of step t inside `region`.
  int added_in(int t, Region region) const;

 private:
  const GreedyTrace* trace_;
  std::vector<std::vector<std::int32_t>> columns_;
  std::vector<std::vector<std::int32_t>> lines_;
};

enum class CornerSide { for_q, for_pl };

struct CornerSnapshot {
  int t = 1;
  Region region;
  CornerSide side = CornerSide::for_q;
  std::vector<Point> corners;  // sorted by x
};

/// Pareto-maximal points among those of X ∪ Y inside `region` with y < t.
/// for_q keeps points with nothing else weakly up-and-right of them,
/// for_pl points with nothing weakly up-and-left. Valid for 1 <= t <= n+1.
CornerSnapshot corner_points(const GreedyTrace& trace, Region region, int t, CornerSide side);

/// Corner staircase maintained across the sweep. Every new point sits on the
/// highest line so far, so a step only pops corners on the dominated side of
/// its outermost new point and pushes that point.
class CornerTracker {
 public:
  CornerTracker(const TraceIndex& index, Region region, CornerSide side = CornerSide::for_q);

  /// Corners reflect points with y < t().
  int t() const noexcept { return t_; }
  std::size_t size() const noexcept { return corners_.size(); }
  std::vector<Point> corners() const;
  bool is_corner_column(int x) const;
  /// Current top y of column x (0 when empty); x must be in the region.
  std::int32_t top(int x) const { return tops_.at(static_cast<std::size_t>(x - region_.lo)); }

  /// Places step t()'s points that fall in the region and moves to t()+1.
  void advance();

 private:
  const TraceIndex* index_;
  Region region_;
  CornerSide side_;
  int t_ = 1;
  std::vector<std::int32_t> tops_;
  std::vector<Point> corners_;  // stack; outermost new point on top
};

enum class ExposureState { hidden, exposed, not_arrived };

std::string_view exposure_name(ExposureState state);

/// State of base point p (p.x in region) at time t, read directly off the
/// trace: the topmost point q of p's column below t is hidden when the
/// region holds points strictly left and strictly right of q on line q.y.
/// Throws PreconditionError if p is not a base point or p.x is outside region.
ExposureState hidden_state(const GreedyTrace& trace, Region region, Point p, int t);

struct ExposureEvent {
  int t = 0;
  ExposureState state = ExposureState::exposed;
};

struct ExposureTimeline {
  Point base_point;
  std::vector<ExposureEvent> events;  // alternating states, first at arrival+1

  int changes() const noexcept { return events.empty() ? 0 : static_cast<int>(events.size()) - 1; }
};

/// One timeline per base point of the region, ordered by column.
std::vector<ExposureTimeline> exposure_timeline(const TraceIndex& index, Region region);

struct Check {
  std::string lemma;
  bool holds = true;
  bool hard = true;
  std::int64_t measured = 0;
  std::int64_t bound = 0;
  std::string witness;  // first counterexample, empty when the check holds
};

struct LemmaReport {
  Partition partition;
  std::vector<Check> checks;

  bool hard_checks_hold() const;
};

/// corner_growth: for accesses in P, |C_{t+1}| - |C_t| <= 1 (measured: the
/// largest change seen).
Check verify_corner_growth(const TraceIndex& index, const Partition& partition);

/// corner_decay (hard): for accesses right of P, |C| is unchanged when no
/// point lands in P and otherwise drops by at least |M^P| - 1 (measured: the
/// largest excess over that allowance; 0 or less when it holds).
/// corner_decay_partner (soft): each such added point sits on a column whose
/// previous top was in C_t.
std::vector<Check> verify_corner_decay(const TraceIndex& index, const Partition& partition);

/// exposure_source: a P point turning exposed at t'+1 was exposed by the
/// access at t', which lies in P. hidden_no_add: while a P point is hidden,
/// accesses outside P put nothing on its column.
std::vector<Check> verify_exposure_source(const TraceIndex& index, const Partition& partition);

/// state_changes: hidden/exposed transitions of P's points, arrival state
/// excluded, total at most 5k.
Check verify_state_changes(const TraceIndex& index, const Partition& partition);

/// cross_q_into_p / cross_p_into_q: additions in one block by accesses in the
/// other, each at most 7k. cross_prefix (P starts at key 1) and cross_suffix
/// (Q ends at key n) tighten these to 2k. non_extreme_*: the same sums minus
/// the two outermost points of each step, at most 5k.
std::vector<Check> verify_cross_additions(const TraceIndex& index, const Partition& partition);

/// global_bound: added_count <= 7 n ceil(log2 n).
Check verify_global_bound(const GreedyTrace& trace);
std::int64_t global_bound(int n);

enum LemmaFamily : unsigned {
  kCornerGrowth = 1u << 0,
  kCornerDecay = 1u << 1,
  kExposureSource = 1u << 2,
  kStateChanges = 1u << 3,
  kCrossAdditions = 1u << 4,
  kGlobalBound = 1u << 5,
  kAllLemmas = (1u << 6) - 1,
};

/// Parses "all" or a comma-separated list of family names
/// (corner_growth, corner_decay, exposure_source, state_changes,
/// cross_additions, global_bound). Throws std::invalid_argument.
unsigned parse_lemma_set(std::string_view text);

LemmaReport verify_partition(const TraceIndex& index, const Partition& partition,
                             unsigned lemmas = kAllLemmas);

enum class PartitionScheme { dyadic, all_halves };

struct Verification {
  std::string instance_hash;
  int n = 0;
  std::int64_t added = 0;
  std::vector<LemmaReport> reports;  // ordered by partition
  std::vector<Check> global;         // empty unless global_bound was selected
  /// Largest state_changes measured / k over all partitions.
  double max_state_changes_per_key = 0.0;

  bool hard_checks_hold() const;
  /// First failing hard check, formatted with its partition.
  std::string first_failure() const;
};

Verification verify_trace(const GreedyTrace& trace, PartitionScheme scheme,
                          unsigned lemmas = kAllLemmas);

/// {"instance_hash", "partition": [lo1, hi1, lo2, hi2], "checks": [...]}
std::string lemma_report_to_json(const std::string& instance_hash, const LemmaReport& report);
std::string verification_to_json(const Verification& verification, PartitionScheme scheme,
                                 unsigned lemmas);

}  // namespace arbor::analysis
