#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "arbor/generators.hpp"
#include "arbor/greedy.hpp"
#include "arbor/oracle.hpp"
#include "json.hpp"
#include "support/reference.hpp"

using namespace arbor;

namespace {

const Instance kSixKeys({6, 1, 2, 4, 3, 5});

struct RealPoint {
  double x, y;
};

// Satisfaction over real coordinates, straight from the definition.
bool real_satisfied(const std::vector<RealPoint>& set) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      const RealPoint p = set[i], q = set[j];
      if (p.x == q.x || p.y == q.y) continue;
      const double x0 = std::min(p.x, q.x), x1 = std::max(p.x, q.x);
      const double y0 = std::min(p.y, q.y), y1 = std::max(p.y, q.y);
      bool ok = false;
      for (std::size_t k = 0; k < set.size() && !ok; ++k) {
        if (k == i || k == j) continue;
        ok = x0 <= set[k].x && set[k].x <= x1 && y0 <= set[k].y && set[k].y <= y1;
      }
      if (!ok) return false;
    }
  }
  return true;
}

std::vector<Point> with_base(const Instance& inst, const std::vector<Point>& added) {
  std::vector<Point> all = inst.points();
  all.insert(all.end(), added.begin(), added.end());
  return all;
}

}  // namespace

TEST(GridCandidates, Examples) {
  EXPECT_EQ(grid_candidates(Instance({1, 2})), (std::vector<Point>{{1, 2}, {2, 1}}));
  EXPECT_TRUE(grid_candidates(Instance({1})).empty());
  EXPECT_EQ(grid_candidates(Instance({2, 3, 1})).size(), 6u);
  EXPECT_EQ(grid_candidates(kSixKeys).size(), 30u);
}

TEST(MinArb, TrivialInstances) {
  const OracleResult one = min_arb(Instance({1}));
  EXPECT_EQ(one.size, 0);
  EXPECT_EQ(one.status, OracleStatus::exact);

  const Instance seq({1, 2, 3});
  const OracleResult r = min_arb(seq);
  EXPECT_EQ(r.size, 2);
  EXPECT_EQ(r.status, OracleStatus::exact);
  EXPECT_EQ(r.lower_bound, 2);
  EXPECT_EQ(brute::brute_min_arb(seq, 4), 2);
  EXPECT_TRUE(is_satisfied(with_base(seq, r.optimal_added)));
}

TEST(MinArb, SixKeyOptimumIsSeven) {
  const OracleResult r = min_arb(kSixKeys);
  ASSERT_EQ(r.status, OracleStatus::exact);
  EXPECT_EQ(r.size, 7);
  EXPECT_EQ(static_cast<std::int64_t>(r.optimal_added.size()), r.size);
  EXPECT_TRUE(brute::brute_unsatisfied(with_base(kSixKeys, r.optimal_added)).empty());
  EXPECT_LE(r.size, added_count(run(kSixKeys)));
}

TEST(MinArb, SixKeyNoSixPointSolutionByEnumeration) {
  // 30 choose <=6 is about 800k subsets; each check is on at most 12 points.
  EXPECT_EQ(brute::brute_min_arb(kSixKeys, 6), -1);
}

TEST(MinArb, AgreesWithSubsetEnumerationUpToFour) {
  for (int n = 1; n <= 4; ++n) {
    for (const Instance& inst : enumerate_permutations(n)) {
      const OracleResult r = min_arb(inst);
      ASSERT_EQ(r.status, OracleStatus::exact);
      ASSERT_EQ(r.size, brute::brute_min_arb(inst, n * n - n)) << inst.content_hash();
    }
  }
}

TEST(MinArb, SoundAndDominatedByGreedyUpToFive) {
  for (int n = 1; n <= 5; ++n) {
    for (const Instance& inst : enumerate_permutations(n)) {
      const OracleResult r = min_arb(inst);
      ASSERT_EQ(r.status, OracleStatus::exact);
      ASSERT_TRUE(brute::brute_unsatisfied(with_base(inst, r.optimal_added)).empty());
      ASSERT_NO_THROW(AugmentedSet(inst, r.optimal_added));
      ASSERT_GE(added_count(run(inst)), r.size);
    }
  }
}

TEST(MinArb, DeterministicAcrossRuns) {
  const OracleResult a = min_arb(kSixKeys);
  const OracleResult b = min_arb(kSixKeys);
  EXPECT_EQ(a.optimal_added, b.optimal_added);
  EXPECT_EQ(a.nodes_expanded, b.nodes_expanded);
}

TEST(MinArb, GridSnapPreservesSatisfaction) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> sign(0, 1);
  for (int n = 2; n <= 5; ++n) {
    for (const Instance& inst : enumerate_permutations(n)) {
      const OracleResult r = min_arb(inst);
      for (int trial = 0; trial < 3; ++trial) {
        std::vector<RealPoint> real;
        for (const Point p : inst.points()) real.push_back({double(p.x), double(p.y)});
        for (const Point p : r.optimal_added) {
          real.push_back({p.x + (sign(rng) ? 0.25 : -0.25), p.y + (sign(rng) ? 0.25 : -0.25)});
        }
        std::vector<Point> snapped;
        for (const RealPoint q : real) {
          snapped.push_back({static_cast<std::int32_t>(std::lround(q.x)),
                             static_cast<std::int32_t>(std::lround(q.y))});
        }
        std::sort(snapped.begin(), snapped.end());
        snapped.erase(std::unique(snapped.begin(), snapped.end()), snapped.end());
        ASSERT_TRUE(brute::brute_unsatisfied(snapped).empty());
      }
    }
  }
}

TEST(MinArb, GridSnapOfOffGridSupersets) {
  // Random satisfied off-grid supersets: greedy output plus points at
  // half-integer offsets, kept only when still satisfied.
  std::mt19937_64 rng(22);
  int kept = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const Instance inst = brute::random_instance(2 + static_cast<int>(rng() % 5), rng);
    std::vector<RealPoint> real;
    for (const Point p : run(inst).augmented().points()) real.push_back({double(p.x), double(p.y)});
    const int n = inst.n();
    std::uniform_real_distribution<double> coord(0.6, n + 0.4);
    for (int extra = 0; extra < 2; ++extra) {
      real.push_back({std::round(coord(rng) * 4) / 4, std::round(coord(rng) * 4) / 4});
    }
    if (!real_satisfied(real)) continue;
    ++kept;
    std::vector<Point> snapped;
    for (const RealPoint q : real) {
      // Ties at .5 go down; either direction keeps witnesses on the boundary.
      snapped.push_back({static_cast<std::int32_t>(std::ceil(q.x - 0.5)),
                         static_cast<std::int32_t>(std::ceil(q.y - 0.5))});
    }
    std::sort(snapped.begin(), snapped.end());
    snapped.erase(std::unique(snapped.begin(), snapped.end()), snapped.end());
    ASSERT_TRUE(brute::brute_unsatisfied(snapped).empty()) << "trial " << trial;
  }
  EXPECT_GT(kept, 20);
}

TEST(MinArb, BudgetExhaustionFallsBackToGreedy) {
  const OracleResult r = min_arb(kSixKeys, 0, 1);
  EXPECT_EQ(r.status, OracleStatus::budget_exhausted);
  EXPECT_EQ(r.optimal_added, run(kSixKeys).added_points());
  EXPECT_EQ(r.size, 9);
  EXPECT_LE(r.lower_bound, 7);

  const OracleResult tight = min_arb(kSixKeys, 20, 5);
  EXPECT_EQ(tight.status, OracleStatus::budget_exhausted);
  EXPECT_LE(tight.nodes_expanded, 5);

  const OracleResult limited = min_arb(kSixKeys, 6, kDefaultNodeBudget);
  EXPECT_EQ(limited.status, OracleStatus::budget_exhausted);
  EXPECT_EQ(limited.lower_bound, 7);
}

TEST(MinArb, Preconditions) {
  EXPECT_THROW(min_arb(generate({Pattern::sequential, 9, 0})), PreconditionError);
  EXPECT_THROW(min_arb(kSixKeys, -1, 10), PreconditionError);
  EXPECT_THROW(min_arb(kSixKeys, 5, 0), PreconditionError);
  EXPECT_EQ(default_size_limit(1), 1);
  EXPECT_EQ(default_size_limit(6), 24);
}

TEST(RatioReport, SmallCases) {
  const std::vector<Instance> one{Instance({1})};
  const RatioTable t1 = ratio_report(one);
  ASSERT_EQ(t1.rows.size(), 1u);
  EXPECT_DOUBLE_EQ(t1.rows[0].ratio, 1.0);
  EXPECT_DOUBLE_EQ(t1.max_ratio, 1.0);

  const std::vector<Instance> seq{Instance({1, 2, 3})};
  const RatioTable t3 = ratio_report(seq);
  EXPECT_EQ(t3.rows[0].greedy_total, 5);
  EXPECT_EQ(t3.rows[0].opt_total, 5);
  EXPECT_DOUBLE_EQ(t3.rows[0].ratio, 1.0);
}

TEST(RatioReport, ExhaustiveFiveMaximumIsPinned) {
  const auto all = enumerate_permutations(5);
  const RatioTable table = ratio_report(all);
  EXPECT_EQ(table.exact_rows, 120);
  EXPECT_NEAR(table.max_ratio, 1.2, 1e-12);
  EXPECT_NEAR(table.mean_ratio, 1.082795, 5e-7);
  for (const auto& row : table.rows) {
    EXPECT_GE(row.ratio, 1.0);
    EXPECT_FALSE(row.flagged);
  }
}

TEST(RatioReport, FlaggedRowsExcluded) {
  const std::vector<Instance> insts{kSixKeys, Instance({1})};
  const RatioTable table = ratio_report(insts, 0, 1);
  EXPECT_TRUE(table.rows[0].flagged);
  EXPECT_FALSE(table.rows[1].flagged);
  EXPECT_EQ(table.exact_rows, 1);
  EXPECT_DOUBLE_EQ(table.max_ratio, 1.0);
  const std::string csv = ratio_table_to_csv(table);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "index,n,instance_hash,greedy_total,opt_total,ratio,flagged");
}

TEST(OracleJson, Fields) {
  const OracleResult r = min_arb(Instance({1, 2, 3}));
  const auto doc = nlohmann::json::parse(oracle_result_to_json(Instance({1, 2, 3}), r));
  EXPECT_EQ(doc.at("n"), 3);
  EXPECT_EQ(doc.at("status"), "exact");
  EXPECT_EQ(doc.at("size"), 2);
  EXPECT_EQ(doc.at("points").size(), 2u);
  EXPECT_EQ(doc.at("instance_hash"), Instance({1, 2, 3}).content_hash());
}
