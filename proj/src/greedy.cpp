#include "arbor/greedy.hpp"

#include <algorithm>
#include <sstream>

#include "arbor/kernels/record_scan.hpp"
#include "json.hpp"

namespace arbor {

Frontier::Frontier(int n) {
  if (n < 1) throw PreconditionError("frontier needs at least one column");
  top_.assign(static_cast<std::size_t>(n), 0);
  top_mirror_.assign(static_cast<std::size_t>(n), 0);
}

void Frontier::place(Point p) {
  if (p.x < 1 || p.x > n()) {
    std::ostringstream msg;
    msg << "point " << p << " is outside columns 1.." << n();
    throw PreconditionError(msg.str());
  }
  if (p.y < line_) {
    std::ostringstream msg;
    msg << "point " << p << " lies below the sweep line " << line_;
    throw SweepOrderError(msg.str());
  }
  const auto i = static_cast<std::size_t>(p.x - 1);
  top_[i] = std::max(top_[i], p.y);
  top_mirror_[top_.size() - 1 - i] = top_[i];
  line_ = p.y;
}

std::vector<Point> greedy_step(const Frontier& frontier, Point p) {
  const int n = frontier.n();
  if (p.x < 1 || p.x > n) {
    std::ostringstream msg;
    msg << "access " << p << " is outside columns 1.." << n;
    throw PreconditionError(msg.str());
  }
  if (p.y <= frontier.line_) {
    std::ostringstream msg;
    msg << "access " << p << " is not above the sweep line " << frontier.line_;
    throw SweepOrderError(msg.str());
  }

  const std::int32_t own_top = frontier.top_[static_cast<std::size_t>(p.x - 1)];
  std::vector<std::int32_t> hits;
  std::vector<Point> added;

  // Leftward: columns p.x-1 .. 1 are mirror slots n-p.x+1 .. n-1.
  kernels::max_records(std::span(frontier.top_mirror_).subspan(static_cast<std::size_t>(n - p.x + 1)),
                       own_top, hits);
  for (auto it = hits.rbegin(); it != hits.rend(); ++it) added.push_back({p.x - 1 - *it, p.y});

  hits.clear();
  kernels::max_records(std::span(frontier.top_).subspan(static_cast<std::size_t>(p.x)), own_top,
                       hits);
  for (const std::int32_t j : hits) added.push_back({p.x + 1 + j, p.y});
  return added;
}

std::vector<Point> GreedyTrace::added_points() const {
  std::vector<Point> out;
  for (const auto& s : steps) out.insert(out.end(), s.added.begin(), s.added.end());
  std::sort(out.begin(), out.end());
  return out;
}

AugmentedSet GreedyTrace::augmented() const { return AugmentedSet(instance, added_points()); }

std::vector<Point> GreedyTrace::parent_violations() const {
  std::vector<Point> out;
  for (const auto& s : steps) {
    for (std::size_t i = 0; i < s.added.size(); ++i) {
      if (s.parents[i].x != s.added[i].x || s.parents[i].y >= s.added[i].y) {
        out.push_back(s.added[i]);
      }
    }
  }
  return out;
}

GreedyTrace run(const Instance& instance) {
  GreedyTrace trace{instance, {}};
  trace.steps.reserve(static_cast<std::size_t>(instance.n()));
  Frontier frontier(instance.n());
  for (int t = 1; t <= instance.n(); ++t) {
    GreedyStep step;
    step.access = instance.point_at(t);
    step.added = greedy_step(frontier, step.access);
    step.parents.reserve(step.added.size());
    for (const Point q : step.added) {
      step.parents.push_back({q.x, instance.time_of(q.x)});
      frontier.place(q);
    }
    frontier.place(step.access);
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

std::int64_t added_count(const GreedyTrace& trace) {
  std::int64_t total = 0;
  for (const auto& s : trace.steps) total += static_cast<std::int64_t>(s.added.size());
  return total;
}

std::string trace_to_json(const GreedyTrace& trace) {
  nlohmann::ordered_json doc;
  doc["n"] = trace.instance.n();
  doc["instance_hash"] = trace.instance.content_hash();
  doc["access"] = std::vector<std::int32_t>(trace.instance.access().begin(),
                                            trace.instance.access().end());
  auto& steps = doc["steps"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    std::vector<std::int32_t> xs;
    for (const Point q : trace.steps[i].added) xs.push_back(q.x);
    steps.push_back({{"t", static_cast<int>(i + 1)}, {"added_x", xs}});
  }
  return doc.dump() + "\n";
}

GreedyTrace trace_from_json(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    Instance instance(doc.at("access").get<std::vector<std::int32_t>>());
    if (doc.at("n").get<int>() != instance.n()) throw InputError("trace 'n' disagrees with 'access'");
    GreedyTrace trace{instance, {}};
    trace.steps.resize(static_cast<std::size_t>(instance.n()));
    for (int t = 1; t <= instance.n(); ++t) trace.steps[t - 1].access = instance.point_at(t);
    for (const auto& entry : doc.at("steps")) {
      const int t = entry.at("t").get<int>();
      if (t < 1 || t > instance.n()) throw InputError("trace step time out of range");
      auto& step = trace.steps[static_cast<std::size_t>(t - 1)];
      for (const auto x : entry.at("added_x").get<std::vector<std::int32_t>>()) {
        step.added.push_back({x, t});
        step.parents.push_back({x, instance.time_of(x)});
      }
      std::sort(step.added.begin(), step.added.end());
      std::sort(step.parents.begin(), step.parents.end());
    }
    return trace;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed trace JSON: ") + e.what());
  } catch (const std::out_of_range&) {
    throw InputError("trace JSON references a key outside 1..n");
  }
}

std::string trace_to_csv(const GreedyTrace& trace) {
  std::ostringstream out;
  out << "t,access_key,num_added,cumulative_added\n";
  std::int64_t cumulative = 0;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    cumulative += static_cast<std::int64_t>(s.added.size());
    out << (i + 1) << ',' << s.access.x << ',' << s.added.size() << ',' << cumulative << '\n';
  }
  return out.str();
}

}  // namespace arbor
