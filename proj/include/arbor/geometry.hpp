#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace arbor {

/// Raised when a caller breaks an operation's documented precondition.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed or non-permutation input. `line()` is 1-based, 0 when not tied to a line.
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& what, int line = 0)
      : std::runtime_error(what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// A (key, time) crossing on the integer grid. Ordered lexicographically by (x, y).
struct Point {
  std::int32_t x = 0;
  std::int32_t y = 0;

  friend constexpr auto operator<=>(const Point&, const Point&) = default;
};

std::ostream& operator<<(std::ostream& os, const Point& p);

using PointPair = std::pair<Point, Point>;

/// Smallest L with 2^L >= n; 0 for n <= 1.
constexpr int ceil_log2(std::int64_t n) {
  int log = 0;
  while ((std::int64_t{1} << log) < n) ++log;
  return log;
}

/// A permutation access sequence: exactly one access per key and per time.
class Instance {
 public:
  /// `access[t-1]` is the key accessed at time t. Throws InputError unless
  /// the sequence is a permutation of 1..n; the error names the 1-based
  /// position of the first offending entry.
  explicit Instance(std::vector<std::int32_t> access);

  int n() const noexcept { return static_cast<int>(access_.size()); }
  std::int32_t key_at(int t) const { return access_.at(t - 1); }
  std::int32_t time_of(int key) const { return time_of_.at(key - 1); }
  std::span<const std::int32_t> access() const noexcept { return access_; }

  /// Base point set X, ordered by time.
  std::vector<Point> points() const;
  Point point_at(int t) const { return {key_at(t), t}; }

  /// 16 hex digits of FNV-1a over the text form of the access sequence.
  std::string content_hash() const;

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  std::vector<std::int32_t> access_;
  std::vector<std::int32_t> time_of_;
};

/// An instance together with the points added to it.
class AugmentedSet {
 public:
  /// Throws PreconditionError if an added point is off the instance grid,
  /// coincides with a base point, or repeats.
  AugmentedSet(Instance base, std::vector<Point> added);

  const Instance& base() const noexcept { return base_; }
  std::span<const Point> added() const noexcept { return added_; }
  /// X ∪ Y sorted by (x, y).
  std::vector<Point> points() const;

 private:
  Instance base_;
  std::vector<Point> added_;
};

/// True iff p and q share a row or column, or some other point of `set`
/// lies in the closed rectangle they span. Throws PreconditionError if
/// p == q or either is missing from `set`.
bool is_pair_satisfied(Point p, Point q, std::span<const Point> set);

/// All-pairs checker, cubic time. Serves as the oracle for `is_satisfied`.
bool is_satisfied_reference(std::span<const Point> set);

/// Row sweep over column successor arrays, using the record-scan kernels.
/// Throws PreconditionError on duplicate points.
bool is_satisfied(std::span<const Point> set);

/// Every unsatisfied pair as (smaller point, larger point) in (x, y) order,
/// sorted lexicographically.
std::vector<PointPair> unsatisfied_pairs(std::span<const Point> set);

// Text and JSON formats ------------------------------------------------------

/// One key per line, time order; blank lines and '#' comments are skipped.
Instance parse_instance(std::string_view text);
Instance read_instance_file(const std::string& path);
std::string format_instance(const Instance& instance);

/// {"n": int, "points": [[x, y], ...]}
std::string points_to_json(int n, std::span<const Point> points);
std::vector<Point> points_from_json(std::string_view text, int* n_out = nullptr);

}  // namespace arbor
