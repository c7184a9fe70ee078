#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arbor/geometry.hpp"

namespace arbor {

enum class OracleStatus { exact, budget_exhausted };

std::string_view status_name(OracleStatus status);

struct OracleResult {
  std::vector<Point> optimal_added;  // sorted by (x, y)
  std::int64_t size = 0;
  OracleStatus status = OracleStatus::exact;
  std::int64_t nodes_expanded = 0;
  /// Every added-set size below this was refuted. Equals `size` when exact.
  std::int64_t lower_bound = 0;
};

/// Largest n the exact search accepts (the grid must fit a 64-bit mask).
inline constexpr int kOracleMaxN = 8;
inline constexpr std::int64_t kDefaultNodeBudget = 10'000'000;

/// n * ceil(log2 n) + n.
int default_size_limit(int n);

/// Every grid crossing not occupied by a base point, sorted by (x, y).
std::vector<Point> grid_candidates(const Instance& instance);

/// Minimum-cardinality augmentation on the candidate grid.
///
/// Iterative deepening on the added-set size. Each node takes the
/// lexicographically first unsatisfied pair and branches over the empty
/// grid cells of its closed box in (x, y) order; any satisfying superset has
/// to put a point there. Nodes are cut when a packing of unsatisfied pairs
/// with pairwise-disjoint candidate cells needs more points than remain, and
/// sets already refuted at the current depth are memoised.
///
/// On budget exhaustion, or when no solution fits `size_limit`, the result is
/// `budget_exhausted` and carries GreedyArb's output as the best known set.
/// Throws PreconditionError when n exceeds kOracleMaxN or a limit is out of range.
OracleResult min_arb(const Instance& instance, int size_limit, std::int64_t node_budget);
OracleResult min_arb(const Instance& instance);

/// {"n", "status", "size", "points", "nodes_expanded", "lower_bound", "instance_hash"}
std::string oracle_result_to_json(const Instance& instance, const OracleResult& result);

struct RatioRow {
  int index = 0;
  int n = 0;
  std::string instance_hash;
  std::int64_t greedy_total = 0;  // n + GreedyArb added count
  std::int64_t opt_total = 0;     // n + oracle size
  double ratio = 0.0;
  bool flagged = false;  // oracle did not finish; excluded from max/mean
};

struct RatioTable {
  std::vector<RatioRow> rows;
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
  int exact_rows = 0;
};

RatioTable ratio_report(std::span<const Instance> instances, int size_limit = -1,
                        std::int64_t node_budget = kDefaultNodeBudget);

/// Header "index,n,instance_hash,greedy_total,opt_total,ratio,flagged".
std::string ratio_table_to_csv(const RatioTable& table);

}  // namespace arbor
