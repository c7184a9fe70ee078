#include "arbor/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <sstream>
#include <unordered_set>

#include "arbor/greedy.hpp"
#include "json.hpp"

namespace arbor {

std::string_view status_name(OracleStatus status) {
  return status == OracleStatus::exact ? "exact" : "budget_exhausted";
}

int default_size_limit(int n) { return n * ceil_log2(n) + n; }

std::vector<Point> grid_candidates(const Instance& instance) {
  std::vector<Point> out;
  const int n = instance.n();
  out.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1));
  for (int x = 1; x <= n; ++x) {
    for (int y = 1; y <= n; ++y) {
      if (instance.key_at(y) != x) out.push_back({x, y});
    }
  }
  return out;
}

namespace {

using Mask = std::uint64_t;

// Cells are numbered x-major, so increasing bit index is increasing (x, y).
class BoxSearch {
 public:
  BoxSearch(int n, std::int64_t budget) : n_(n), budget_(budget) {
    const int cells = n * n;
    box_.assign(static_cast<std::size_t>(cells * cells), 0);
    for (int a = 0; a < cells; ++a) {
      for (int b = a + 1; b < cells; ++b) {
        const int x0 = std::min(a / n, b / n), x1 = std::max(a / n, b / n);
        const int y0 = std::min(a % n, b % n), y1 = std::max(a % n, b % n);
        Mask m = 0;
        for (int x = x0; x <= x1; ++x) {
          for (int y = y0; y <= y1; ++y) m |= Mask{1} << (x * n + y);
        }
        box_[static_cast<std::size_t>(a * cells + b)] = m;
      }
    }
  }

  Mask cell(Point p) const { return Mask{1} << ((p.x - 1) * n_ + (p.y - 1)); }

  // True: found a solution within `depth` more points, left in `solution_`.
  bool search(Mask occupied, int depth) {
    if (++nodes_ > budget_) {
      exhausted_ = true;
      return false;
    }

    Mask branch = 0;
    Mask packed = 0;
    int packing = 0;
    bool any = false;
    for (Mask rest_a = occupied; rest_a != 0; rest_a &= rest_a - 1) {
      const int a = std::countr_zero(rest_a);
      for (Mask rest_b = rest_a & (rest_a - 1); rest_b != 0; rest_b &= rest_b - 1) {
        const int b = std::countr_zero(rest_b);
        if (a / n_ == b / n_ || a % n_ == b % n_) continue;
        const Mask box = box_[static_cast<std::size_t>(a * n_ * n_ + b)];
        if ((occupied & box) != ((Mask{1} << a) | (Mask{1} << b))) continue;
        const Mask free = box & ~occupied;
        if (!any) {
          branch = free;
          any = true;
        }
        if ((free & packed) == 0) {
          packed |= free;
          ++packing;
        }
      }
    }

    if (!any) {
      solution_ = occupied;
      return true;
    }
    if (packing > depth) return false;
    if (refuted_.contains(occupied)) return false;

    for (Mask rest = branch; rest != 0; rest &= rest - 1) {
      if (search(occupied | (rest & (~rest + 1)), depth - 1)) return true;
      if (exhausted_) return false;
    }
    refuted_.insert(occupied);
    return false;
  }

  void next_depth() { refuted_.clear(); }

  std::vector<Point> decode(Mask added) const {
    std::vector<Point> out;
    for (; added != 0; added &= added - 1) {
      const int c = std::countr_zero(added);
      out.push_back({c / n_ + 1, c % n_ + 1});
    }
    return out;
  }

  Mask solution() const { return solution_; }
  std::int64_t nodes() const { return nodes_; }
  bool exhausted() const { return exhausted_; }

 private:
  int n_;
  std::int64_t budget_;
  std::int64_t nodes_ = 0;
  bool exhausted_ = false;
  Mask solution_ = 0;
  std::vector<Mask> box_;
  std::unordered_set<Mask> refuted_;
};

}  // namespace

OracleResult min_arb(const Instance& instance, int size_limit, std::int64_t node_budget) {
  const int n = instance.n();
  if (n > kOracleMaxN) {
    throw PreconditionError("exact search supports n <= " + std::to_string(kOracleMaxN) +
                            ", got " + std::to_string(n));
  }
  if (size_limit < 0) throw PreconditionError("size_limit must be non-negative");
  if (node_budget <= 0) throw PreconditionError("node_budget must be positive");

  BoxSearch search(n, node_budget);
  Mask base = 0;
  for (const Point p : instance.points()) base |= search.cell(p);

  OracleResult result;
  for (int k = 0; k <= size_limit; ++k) {
    search.next_depth();
    if (search.search(base, k)) {
      result.optimal_added = search.decode(search.solution() & ~base);
      result.size = static_cast<std::int64_t>(result.optimal_added.size());
      result.lower_bound = result.size;
      result.nodes_expanded = search.nodes();
      return result;
    }
    if (search.exhausted()) break;
    result.lower_bound = k + 1;
  }

  result.status = OracleStatus::budget_exhausted;
  result.optimal_added = run(instance).added_points();
  result.size = static_cast<std::int64_t>(result.optimal_added.size());
  result.nodes_expanded = std::min(search.nodes(), node_budget);
  return result;
}

OracleResult min_arb(const Instance& instance) {
  return min_arb(instance, default_size_limit(instance.n()), kDefaultNodeBudget);
}

std::string oracle_result_to_json(const Instance& instance, const OracleResult& result) {
  nlohmann::ordered_json doc;
  doc["n"] = instance.n();
  doc["instance_hash"] = instance.content_hash();
  doc["status"] = std::string(status_name(result.status));
  doc["size"] = result.size;
  auto& pts = doc["points"] = nlohmann::ordered_json::array();
  for (const Point p : result.optimal_added) pts.push_back({p.x, p.y});
  doc["nodes_expanded"] = result.nodes_expanded;
  doc["lower_bound"] = result.lower_bound;
  return doc.dump() + "\n";
}

RatioTable ratio_report(std::span<const Instance> instances, int size_limit,
                        std::int64_t node_budget) {
  RatioTable table;
  double sum = 0.0;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const Instance& inst = instances[i];
    const int limit = size_limit < 0 ? default_size_limit(inst.n()) : size_limit;
    const OracleResult opt = min_arb(inst, limit, node_budget);
    RatioRow row;
    row.index = static_cast<int>(i);
    row.n = inst.n();
    row.instance_hash = inst.content_hash();
    row.greedy_total = inst.n() + added_count(run(inst));
    row.opt_total = inst.n() + opt.size;
    row.ratio = static_cast<double>(row.greedy_total) / static_cast<double>(row.opt_total);
    row.flagged = opt.status != OracleStatus::exact;
    if (!row.flagged) {
      table.max_ratio = table.exact_rows == 0 ? row.ratio : std::max(table.max_ratio, row.ratio);
      sum += row.ratio;
      ++table.exact_rows;
    }
    table.rows.push_back(std::move(row));
  }
  if (table.exact_rows > 0) table.mean_ratio = sum / table.exact_rows;
  return table;
}

std::string ratio_table_to_csv(const RatioTable& table) {
  std::ostringstream out;
  out << "index,n,instance_hash,greedy_total,opt_total,ratio,flagged\n";
  char ratio[32];
  for (const auto& row : table.rows) {
    std::snprintf(ratio, sizeof ratio, "%.6f", row.ratio);
    out << row.index << ',' << row.n << ',' << row.instance_hash << ',' << row.greedy_total << ','
        << row.opt_total << ',' << ratio << ',' << (row.flagged ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace arbor
