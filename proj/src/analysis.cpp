#include "arbor/analysis.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace arbor::analysis {

namespace {

std::string describe(const Partition& p) {
  std::ostringstream out;
  out << "P=[" << p.p_block.lo << ',' << p.p_block.hi << "] Q=[" << p.q_block.lo << ','
      << p.q_block.hi << ']';
  return out.str();
}

// Number of entries of the sorted list `xs` inside [lo, hi].
int count_between(std::span<const std::int32_t> xs, int lo, int hi) {
  if (lo > hi) return 0;
  const auto first = std::lower_bound(xs.begin(), xs.end(), lo);
  const auto last = std::upper_bound(first, xs.end(), hi);
  return static_cast<int>(last - first);
}

}  // namespace

Partition make_partition(int n, Region p_block, Region q_block) {
  const bool ok = p_block.lo >= 1 && p_block.lo <= p_block.hi && q_block.lo == p_block.hi + 1 &&
                  q_block.lo <= q_block.hi && q_block.hi <= n &&
                  std::abs(p_block.length() - q_block.length()) <= 1;
  if (!ok) {
    throw PreconditionError("invalid partition " + describe({p_block, q_block}) + " for n=" +
                            std::to_string(n));
  }
  return {p_block, q_block};
}

std::vector<Partition> dyadic_partitions(int n) {
  std::vector<Partition> out;
  std::vector<Region> pending{{1, n}};
  while (!pending.empty()) {
    const Region block = pending.back();
    pending.pop_back();
    if (block.length() < 2) continue;
    const int half = (block.length() + 1) / 2;
    const Region left{block.lo, block.lo + half - 1};
    const Region right{block.lo + half, block.hi};
    out.push_back({left, right});
    pending.push_back(left);
    pending.push_back(right);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Partition> all_half_partitions(int n) {
  std::vector<Partition> out;
  for (int j = 1; j <= n; ++j) {
    for (int k = 1; j + 2 * k - 1 <= n; ++k) {
      out.push_back({{j, j + k - 1}, {j + k, j + 2 * k - 1}});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// TraceIndex -------------------------------------------------------------------

TraceIndex::TraceIndex(const GreedyTrace& trace) : trace_(&trace) {
  const int n = trace.instance.n();
  columns_.resize(static_cast<std::size_t>(n));
  lines_.resize(static_cast<std::size_t>(n));
  for (int t = 1; t <= n; ++t) {
    const GreedyStep& step = trace.step(t);
    auto& line = lines_[static_cast<std::size_t>(t - 1)];
    line.reserve(step.added.size() + 1);
    for (const Point q : step.added) line.push_back(q.x);
    line.push_back(step.access.x);
    std::sort(line.begin(), line.end());
    for (const std::int32_t x : line) columns_[static_cast<std::size_t>(x - 1)].push_back(t);
  }
}

int TraceIndex::added_in(int t, Region region) const {
  const auto& added = trace_->step(t).added;
  const auto lo = std::lower_bound(added.begin(), added.end(), Point{region.lo, 0});
  const auto hi = std::lower_bound(lo, added.end(), Point{region.hi + 1, 0});
  return static_cast<int>(hi - lo);
}

// Corners ----------------------------------------------------------------------

CornerSnapshot corner_points(const GreedyTrace& trace, Region region, int t, CornerSide side) {
  const int n = trace.instance.n();
  if (t < 1 || t > n + 1) throw PreconditionError("corner time must lie in 1..n+1");

  std::vector<Point> placed;
  for (int s = 1; s < t; ++s) {
    const GreedyStep& step = trace.step(s);
    if (region.contains(step.access.x)) placed.push_back(step.access);
    for (const Point q : step.added) {
      if (region.contains(q.x)) placed.push_back(q);
    }
  }

  // Sweep outward from the dominating side; a point survives when it is
  // strictly higher than everything already swept.
  if (side == CornerSide::for_q) {
    std::sort(placed.begin(), placed.end(),
              [](Point a, Point b) { return a.x != b.x ? a.x > b.x : a.y > b.y; });
  } else {
    std::sort(placed.begin(), placed.end(),
              [](Point a, Point b) { return a.x != b.x ? a.x < b.x : a.y > b.y; });
  }
  CornerSnapshot snap{t, region, side, {}};
  std::int32_t highest = 0;
  for (const Point p : placed) {
    if (p.y > highest) {
      snap.corners.push_back(p);
      highest = p.y;
    }
  }
  std::sort(snap.corners.begin(), snap.corners.end());
  return snap;
}

CornerTracker::CornerTracker(const TraceIndex& index, Region region, CornerSide side)
    : index_(&index), region_(region), side_(side) {
  tops_.assign(static_cast<std::size_t>(region.length()), 0);
}

std::vector<Point> CornerTracker::corners() const {
  std::vector<Point> out(corners_.begin(), corners_.end());
  std::sort(out.begin(), out.end());
  return out;
}

bool CornerTracker::is_corner_column(int x) const {
  return std::any_of(corners_.begin(), corners_.end(), [x](Point c) { return c.x == x; });
}

void CornerTracker::advance() {
  if (t_ > index_->n()) throw PreconditionError("corner tracker advanced past the last step");
  const auto line = index_->line(t_);
  const auto first = std::lower_bound(line.begin(), line.end(), region_.lo);
  const auto last = std::upper_bound(first, line.end(), region_.hi);
  if (first != last) {
    for (auto it = first; it != last; ++it) tops_[static_cast<std::size_t>(*it - region_.lo)] = t_;
    if (side_ == CornerSide::for_q) {
      // Stack runs right to left; the new rightmost point shadows every
      // corner at or left of it.
      const std::int32_t outer = *(last - 1);
      while (!corners_.empty() && corners_.back().x <= outer) corners_.pop_back();
      corners_.push_back({outer, t_});
    } else {
      const std::int32_t outer = *first;
      while (!corners_.empty() && corners_.back().x >= outer) corners_.pop_back();
      corners_.push_back({outer, t_});
    }
  }
  ++t_;
}

// Hidden / exposed ---------------------------------------------------------------

std::string_view exposure_name(ExposureState state) {
  switch (state) {
    case ExposureState::hidden:
      return "hidden";
    case ExposureState::exposed:
      return "exposed";
    case ExposureState::not_arrived:
      return "not_arrived";
  }
  return "unknown";
}

ExposureState hidden_state(const GreedyTrace& trace, Region region, Point p, int t) {
  const Instance& inst = trace.instance;
  if (p.x < 1 || p.x > inst.n() || p.y < 1 || p.y > inst.n() || inst.key_at(p.y) != p.x) {
    std::ostringstream msg;
    msg << p << " is not a base point";
    throw PreconditionError(msg.str());
  }
  if (!region.contains(p.x)) {
    std::ostringstream msg;
    msg << p << " lies outside keys " << region.lo << ".." << region.hi;
    throw PreconditionError(msg.str());
  }
  if (t <= p.y) return ExposureState::not_arrived;

  int top_line = p.y;
  for (int s = std::min(t - 1, inst.n()); s > p.y; --s) {
    const auto& added = trace.step(s).added;
    if (std::find_if(added.begin(), added.end(), [&](Point q) { return q.x == p.x; }) !=
        added.end()) {
      top_line = s;
      break;
    }
  }

  const GreedyStep& step = trace.step(top_line);
  bool left = false;
  bool right = false;
  auto look = [&](Point r) {
    if (!region.contains(r.x)) return;
    left = left || r.x < p.x;
    right = right || r.x > p.x;
  };
  look(step.access);
  for (const Point q : step.added) look(q);
  return left && right ? ExposureState::hidden : ExposureState::exposed;
}

namespace {

// State of column x's base point while the top of that column is on `line`.
ExposureState state_on_line(const TraceIndex& index, Region region, int x, int line) {
  const auto xs = index.line(line);
  const bool left = count_between(xs, region.lo, x - 1) > 0;
  const bool right = count_between(xs, x + 1, region.hi) > 0;
  return left && right ? ExposureState::hidden : ExposureState::exposed;
}

}  // namespace

std::vector<ExposureTimeline> exposure_timeline(const TraceIndex& index, Region region) {
  std::vector<ExposureTimeline> out;
  const Instance& inst = index.trace().instance;
  for (int x = region.lo; x <= region.hi; ++x) {
    ExposureTimeline tl;
    tl.base_point = {x, inst.time_of(x)};
    for (const std::int32_t y : index.column(x)) {
      const ExposureState s = state_on_line(index, region, x, y);
      if (tl.events.empty() || tl.events.back().state != s) tl.events.push_back({y + 1, s});
    }
    out.push_back(std::move(tl));
  }
  return out;
}

// Checks ---------------------------------------------------------------------------

bool LemmaReport::hard_checks_hold() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return !c.hard || c.holds; });
}

Check verify_corner_growth(const TraceIndex& index, const Partition& partition) {
  Check check{"corner_growth", true, true, 0, 1, {}};
  CornerTracker corners(index, partition.p_block);
  bool seen = false;
  for (int t = 1; t <= index.n(); ++t) {
    const auto before = static_cast<std::int64_t>(corners.size());
    corners.advance();
    if (!partition.p_block.contains(index.trace().step(t).access.x)) continue;
    const std::int64_t growth = static_cast<std::int64_t>(corners.size()) - before;
    check.measured = seen ? std::max(check.measured, growth) : growth;
    seen = true;
    if (growth > 1 && check.holds) {
      check.holds = false;
      check.witness = "t=" + std::to_string(t) + ": corners " + std::to_string(before) + " -> " +
                      std::to_string(corners.size());
    }
  }
  return check;
}

std::vector<Check> verify_corner_decay(const TraceIndex& index, const Partition& partition) {
  Check decay{"corner_decay", true, true, 0, 0, {}};
  Check partner{"corner_decay_partner", true, false, 0, 0, {}};
  const Region block = partition.p_block;
  CornerTracker corners(index, block);
  bool seen = false;
  for (int t = 1; t <= index.n(); ++t) {
    const GreedyStep& step = index.trace().step(t);
    const bool applies = step.access.x > block.hi;
    const int landed = applies ? index.added_in(t, block) : 0;
    if (applies) {
      for (const Point q : step.added) {
        if (!block.contains(q.x) || corners.is_corner_column(q.x)) continue;
        ++partner.measured;
        if (partner.holds) {
          std::ostringstream w;
          w << "t=" << t << ": added " << q << " over non-corner top y=" << corners.top(q.x);
          partner.witness = w.str();
        }
        partner.holds = false;
      }
    }

    const auto before = static_cast<std::int64_t>(corners.size());
    corners.advance();
    if (!applies) continue;
    const auto after = static_cast<std::int64_t>(corners.size());
    const std::int64_t allowance = landed > 0 ? landed - 1 : 0;
    const std::int64_t excess = after - (before - allowance);
    decay.measured = seen ? std::max(decay.measured, excess) : excess;
    seen = true;
    const bool ok = landed == 0 ? after == before : excess <= 0;
    if (!ok && decay.holds) {
      decay.holds = false;
      decay.witness = "t=" + std::to_string(t) + ": |M^P|=" + std::to_string(landed) +
                      ", corners " + std::to_string(before) + " -> " + std::to_string(after);
    }
  }
  return {decay, partner};
}

namespace {

// Walks each P column's points in time order with the hidden state of the
// column top, calling visit(x, line, previous, current, access_key) for every
// point above the base point.
template <typename Visit>
void walk_p_columns(const TraceIndex& index, Region block, Visit&& visit) {
  for (int x = block.lo; x <= block.hi; ++x) {
    const auto ys = index.column(x);
    ExposureState previous = ExposureState::not_arrived;
    for (std::size_t i = 0; i < ys.size(); ++i) {
      const ExposureState current = state_on_line(index, block, x, ys[i]);
      if (i > 0) visit(x, ys[i], previous, current, index.trace().step(ys[i]).access.x);
      previous = current;
    }
  }
}

}  // namespace

std::vector<Check> verify_exposure_source(const TraceIndex& index, const Partition& partition) {
  Check source{"exposure_source", true, true, 0, 0, {}};
  Check no_add{"hidden_no_add", true, true, 0, 0, {}};
  const Region block = partition.p_block;
  walk_p_columns(index, block,
                 [&](int x, int line, ExposureState prev, ExposureState cur, int key) {
                   if (prev != ExposureState::hidden || block.contains(key)) return;
                   ++no_add.measured;
                   if (no_add.holds) {
                     no_add.holds = false;
                     no_add.witness = "t=" + std::to_string(line) + ": access " +
                                      std::to_string(key) + " added under hidden column " +
                                      std::to_string(x);
                   }
                   if (cur != ExposureState::exposed) return;
                   ++source.measured;
                   if (source.holds) {
                     source.holds = false;
                     source.witness = "t=" + std::to_string(line + 1) + ": column " +
                                      std::to_string(x) + " exposed by access " +
                                      std::to_string(key) + " outside P";
                   }
                 });
  return {source, no_add};
}

Check verify_state_changes(const TraceIndex& index, const Partition& partition) {
  Check check{"state_changes", true, true, 0, 5LL * partition.k(), {}};
  walk_p_columns(index, partition.p_block,
                 [&](int, int, ExposureState prev, ExposureState cur, int) {
                   if (prev != cur) ++check.measured;
                 });
  check.holds = check.measured <= check.bound;
  if (!check.holds) {
    check.witness = std::to_string(check.measured) + " changes exceed " +
                    std::to_string(check.bound);
  }
  return check;
}

std::vector<Check> verify_cross_additions(const TraceIndex& index, const Partition& partition) {
  const std::int64_t k = partition.k();
  std::int64_t q_into_p = 0, p_into_q = 0, non_extreme_q_into_p = 0, non_extreme_p_into_q = 0;
  for (int t = 1; t <= index.n(); ++t) {
    const int key = index.trace().step(t).access.x;
    if (partition.q_block.contains(key)) {
      const int m = index.added_in(t, partition.p_block);
      q_into_p += m;
      non_extreme_q_into_p += std::max(m - 2, 0);
    } else if (partition.p_block.contains(key)) {
      const int m = index.added_in(t, partition.q_block);
      p_into_q += m;
      non_extreme_p_into_q += std::max(m - 2, 0);
    }
  }

  auto make = [](std::string name, std::int64_t measured, std::int64_t bound) {
    Check c{std::move(name), measured <= bound, true, measured, bound, {}};
    if (!c.holds) c.witness = std::to_string(measured) + " > " + std::to_string(bound);
    return c;
  };
  std::vector<Check> out;
  out.push_back(make("cross_q_into_p", q_into_p, 7 * k));
  out.push_back(make("cross_p_into_q", p_into_q, 7 * k));
  if (partition.p_block.lo == 1) out.push_back(make("cross_prefix", q_into_p, 2 * k));
  if (partition.q_block.hi == index.n()) out.push_back(make("cross_suffix", p_into_q, 2 * k));
  out.push_back(make("non_extreme_q_into_p", non_extreme_q_into_p, 5 * k));
  out.push_back(make("non_extreme_p_into_q", non_extreme_p_into_q, 5 * k));
  return out;
}

std::int64_t global_bound(int n) { return 7LL * n * ceil_log2(n); }

Check verify_global_bound(const GreedyTrace& trace) {
  const int n = trace.instance.n();
  Check check{"global_bound", true, true, added_count(trace), global_bound(n), {}};
  check.holds = check.measured <= check.bound;
  if (!check.holds) {
    check.witness = std::to_string(check.measured) + " added > " + std::to_string(check.bound);
  }
  return check;
}

unsigned parse_lemma_set(std::string_view text) {
  static constexpr std::pair<std::string_view, unsigned> names[] = {
      {"corner_growth", kCornerGrowth},   {"corner_decay", kCornerDecay},
      {"exposure_source", kExposureSource}, {"state_changes", kStateChanges},
      {"cross_additions", kCrossAdditions}, {"global_bound", kGlobalBound},
      {"all", kAllLemmas}};
  unsigned set = 0;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    const auto it = std::find_if(std::begin(names), std::end(names),
                                 [&](const auto& entry) { return entry.first == item; });
    if (it == std::end(names)) throw std::invalid_argument("unknown lemma '" + std::string(item) + "'");
    set |= it->second;
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (set == 0) throw std::invalid_argument("no lemmas selected");
  return set;
}

LemmaReport verify_partition(const TraceIndex& index, const Partition& partition,
                             unsigned lemmas) {
  LemmaReport report{partition, {}};
  auto append = [&](std::vector<Check> checks) {
    for (auto& c : checks) report.checks.push_back(std::move(c));
  };
  if (lemmas & kCornerGrowth) report.checks.push_back(verify_corner_growth(index, partition));
  if (lemmas & kCornerDecay) append(verify_corner_decay(index, partition));
  if (lemmas & kExposureSource) append(verify_exposure_source(index, partition));
  if (lemmas & kStateChanges) report.checks.push_back(verify_state_changes(index, partition));
  if (lemmas & kCrossAdditions) append(verify_cross_additions(index, partition));
  return report;
}

bool Verification::hard_checks_hold() const {
  const auto ok = [](const Check& c) { return !c.hard || c.holds; };
  return std::all_of(global.begin(), global.end(), ok) &&
         std::all_of(reports.begin(), reports.end(),
                     [](const LemmaReport& r) { return r.hard_checks_hold(); });
}

std::string Verification::first_failure() const {
  for (const Check& c : global) {
    if (c.hard && !c.holds) return c.lemma + ": " + c.witness;
  }
  for (const LemmaReport& r : reports) {
    for (const Check& c : r.checks) {
      if (c.hard && !c.holds) return describe(r.partition) + " " + c.lemma + ": " + c.witness;
    }
  }
  return {};
}

Verification verify_trace(const GreedyTrace& trace, PartitionScheme scheme, unsigned lemmas) {
  Verification v;
  v.instance_hash = trace.instance.content_hash();
  v.n = trace.instance.n();
  v.added = added_count(trace);
  const TraceIndex index(trace);
  const auto partitions =
      scheme == PartitionScheme::dyadic ? dyadic_partitions(v.n) : all_half_partitions(v.n);
  const unsigned per_partition = lemmas & ~static_cast<unsigned>(kGlobalBound);
  if (per_partition != 0) {
    v.reports.reserve(partitions.size());
    for (const Partition& p : partitions) {
      v.reports.push_back(verify_partition(index, p, per_partition));
      for (const Check& c : v.reports.back().checks) {
        if (c.lemma == "state_changes") {
          v.max_state_changes_per_key = std::max(
              v.max_state_changes_per_key, static_cast<double>(c.measured) / p.k());
        }
      }
    }
  }
  if (lemmas & kGlobalBound) v.global.push_back(verify_global_bound(trace));
  return v;
}

namespace {

nlohmann::ordered_json check_json(const Check& c) {
  nlohmann::ordered_json j;
  j["lemma"] = c.lemma;
  j["holds"] = c.holds;
  j["measured"] = c.measured;
  j["bound"] = c.bound;
  j["hard"] = c.hard;
  if (!c.witness.empty()) j["witness"] = c.witness;
  return j;
}

nlohmann::ordered_json report_json(const std::string& hash, const LemmaReport& r) {
  nlohmann::ordered_json j;
  j["instance_hash"] = hash;
  j["partition"] = {r.partition.p_block.lo, r.partition.p_block.hi, r.partition.q_block.lo,
                    r.partition.q_block.hi};
  auto& checks = j["checks"] = nlohmann::ordered_json::array();
  for (const Check& c : r.checks) checks.push_back(check_json(c));
  return j;
}

}  // namespace

std::string lemma_report_to_json(const std::string& instance_hash, const LemmaReport& report) {
  return report_json(instance_hash, report).dump();
}

std::string verification_to_json(const Verification& v, PartitionScheme scheme, unsigned lemmas) {
  nlohmann::ordered_json doc;
  doc["instance_hash"] = v.instance_hash;
  doc["n"] = v.n;
  doc["added_count"] = v.added;
  doc["partitions"] = scheme == PartitionScheme::dyadic ? "dyadic" : "all_halves";
  auto& selected = doc["lemmas"] = nlohmann::ordered_json::array();
  for (const auto& [bit, name] : std::initializer_list<std::pair<unsigned, const char*>>{
           {kCornerGrowth, "corner_growth"},
           {kCornerDecay, "corner_decay"},
           {kExposureSource, "exposure_source"},
           {kStateChanges, "state_changes"},
           {kCrossAdditions, "cross_additions"},
           {kGlobalBound, "global_bound"}}) {
    if (lemmas & bit) selected.push_back(name);
  }
  doc["all_hard_checks_hold"] = v.hard_checks_hold();
  doc["max_state_changes_per_key"] = v.max_state_changes_per_key;
  auto& global = doc["global"] = nlohmann::ordered_json::array();
  for (const Check& c : v.global) global.push_back(check_json(c));
  auto& reports = doc["reports"] = nlohmann::ordered_json::array();
  for (const LemmaReport& r : v.reports) reports.push_back(report_json(v.instance_hash, r));
  return doc.dump(1) + "\n";
}

}  // namespace arbor::analysis
