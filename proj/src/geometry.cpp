#include "arbor/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <climits>
#include <fstream>
#include <ostream>
#include <sstream>

#include "arbor/kernels/record_scan.hpp"
#include "json.hpp"

namespace arbor {

std::ostream& operator<<(std::ostream& os, const Point& p) {
  return os << '(' << p.x << ',' << p.y << ')';
}

namespace {

// `where[i]` is the 1-based label reported for entry i (position or line).
void validate_permutation(std::span<const std::int32_t> access,
                          std::span<const int> where, const char* label) {
  const auto n = static_cast<std::int64_t>(access.size());
  if (n == 0) throw InputError("instance is empty");
  std::vector<int> first_seen(access.size(), 0);
  for (std::size_t i = 0; i < access.size(); ++i) {
    const std::int64_t key = access[i];
    const int at = where.empty() ? static_cast<int>(i + 1) : where[i];
    if (key < 1 || key > n) {
      throw InputError("key " + std::to_string(key) + " at " + label + " " +
                           std::to_string(at) + " is outside 1.." + std::to_string(n),
                       at);
    }
    int& seen = first_seen[static_cast<std::size_t>(key - 1)];
    if (seen != 0) {
      throw InputError("key " + std::to_string(key) + " at " + label + " " +
                           std::to_string(at) + " repeats " + label + " " +
                           std::to_string(seen),
                       at);
    }
    seen = at;
  }
}

}  // namespace

Instance::Instance(std::vector<std::int32_t> access) : access_(std::move(access)) {
  validate_permutation(access_, {}, "position");
  time_of_.assign(access_.size(), 0);
  for (std::size_t t = 0; t < access_.size(); ++t) {
    time_of_[static_cast<std::size_t>(access_[t] - 1)] = static_cast<std::int32_t>(t + 1);
  }
}

std::vector<Point> Instance::points() const {
  std::vector<Point> out;
  out.reserve(access_.size());
  for (int t = 1; t <= n(); ++t) out.push_back(point_at(t));
  return out;
}

std::string Instance::content_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const std::string text = format_instance(*this);
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  static constexpr char digits[] = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = digits[h & 0xf];
    h >>= 4;
  }
  buf[16] = '\0';
  return buf;
}

AugmentedSet::AugmentedSet(Instance base, std::vector<Point> added)
    : base_(std::move(base)), added_(std::move(added)) {
  const int n = base_.n();
  std::sort(added_.begin(), added_.end());
  for (std::size_t i = 0; i < added_.size(); ++i) {
    const Point q = added_[i];
    if (q.x < 1 || q.x > n || q.y < 1 || q.y > n) {
      std::ostringstream msg;
      msg << "added point " << q << " is off the " << n << "x" << n << " grid";
      throw PreconditionError(msg.str());
    }
    if (base_.key_at(q.y) == q.x) {
      std::ostringstream msg;
      msg << "added point " << q << " coincides with a base point";
      throw PreconditionError(msg.str());
    }
    if (i > 0 && added_[i - 1] == q) {
      std::ostringstream msg;
      msg << "added point " << q << " appears twice";
      throw PreconditionError(msg.str());
    }
  }
}

std::vector<Point> AugmentedSet::points() const {
  std::vector<Point> out = base_.points();
  out.insert(out.end(), added_.begin(), added_.end());
  std::sort(out.begin(), out.end());
  return out;
}

// Satisfaction -----------------------------------------------------------------

namespace {

bool in_box(Point r, Point p, Point q) {
  return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
         std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
}

bool witnessed(Point p, Point q, std::span<const Point> set) {
  if (p.x == q.x || p.y == q.y) return true;
  for (const Point r : set) {
    if (r != p && r != q && in_box(r, p, q)) return true;
  }
  return false;
}

PointPair ordered(Point a, Point b) { return a < b ? PointPair{a, b} : PointPair{b, a}; }

// Visits each unsatisfied pair once; stops when `visit` returns false.
//
// Rows are swept top-down. Before a row is inserted, `above[c]` holds the
// lowest occupied y in column c strictly above it. For a point p, a point q
// up and to the right spans an empty box exactly when q is the lowest point
// of its column above p.y, the column lies before p's nearest row neighbour,
// and q.y undercuts every `above` value between them, p's own column included.
// That is a strict running-minimum scan; the left side uses a mirrored array.
template <typename Visit>
void sweep_unsatisfied(std::span<const Point> set, Visit&& visit) {
  if (set.size() < 2) return;

  std::vector<std::int32_t> xs, ys;
  xs.reserve(set.size());
  ys.reserve(set.size());
  for (const Point p : set) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  auto rank = [](const std::vector<std::int32_t>& axis, std::int32_t v) {
    return static_cast<std::int32_t>(std::lower_bound(axis.begin(), axis.end(), v) -
                                     axis.begin());
  };

  std::vector<Point> grid;
  grid.reserve(set.size());
  for (const Point p : set) grid.push_back({rank(xs, p.x), rank(ys, p.y)});
  std::sort(grid.begin(), grid.end(),
            [](Point a, Point b) { return a.y != b.y ? a.y > b.y : a.x < b.x; });
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] == grid[i - 1]) {
      std::ostringstream msg;
      msg << "duplicate point " << Point{xs[grid[i].x], ys[grid[i].y]};
      throw PreconditionError(msg.str());
    }
  }

  const auto width = static_cast<std::int32_t>(xs.size());
  std::vector<std::int32_t> above(xs.size(), INT_MAX);
  std::vector<std::int32_t> above_mirror(xs.size(), INT_MAX);
  std::vector<std::int32_t> hits;
  auto original = [&](std::int32_t cx, std::int32_t cy) { return Point{xs[cx], ys[cy]}; };

  std::size_t row_begin = 0;
  while (row_begin < grid.size()) {
    std::size_t row_end = row_begin;
    while (row_end < grid.size() && grid[row_end].y == grid[row_begin].y) ++row_end;

    for (std::size_t i = row_begin; i < row_end; ++i) {
      const std::int32_t x = grid[i].x;
      const std::int32_t y = grid[i].y;
      const std::int32_t seed = above[x];
      const Point p = original(x, y);

      const std::int32_t right_stop = i + 1 < row_end ? grid[i + 1].x : width;
      hits.clear();
      kernels::min_records(std::span(above).subspan(x + 1, right_stop - x - 1), seed, hits);
      for (const std::int32_t j : hits) {
        const std::int32_t c = x + 1 + j;
        if (!visit(PointPair{p, original(c, above[c])})) return;
      }

      const std::int32_t left_stop = i > row_begin ? grid[i - 1].x : -1;
      hits.clear();
      kernels::min_records(std::span(above_mirror).subspan(width - x, x - left_stop - 1),
                           seed, hits);
      for (const std::int32_t j : hits) {
        const std::int32_t c = x - 1 - j;
        if (!visit(ordered(p, original(c, above[c])))) return;
      }
    }

    for (std::size_t i = row_begin; i < row_end; ++i) {
      above[grid[i].x] = grid[i].y;
      above_mirror[width - 1 - grid[i].x] = grid[i].y;
    }
    row_begin = row_end;
  }
}

}  // namespace

bool is_pair_satisfied(Point p, Point q, std::span<const Point> set) {
  if (p == q) throw PreconditionError("is_pair_satisfied needs two distinct points");
  const auto contains = [&](Point r) { return std::find(set.begin(), set.end(), r) != set.end(); };
  if (!contains(p) || !contains(q)) {
    std::ostringstream msg;
    msg << "pair " << p << ", " << q << " is not contained in the set";
    throw PreconditionError(msg.str());
  }
  return witnessed(p, q, set);
}

bool is_satisfied_reference(std::span<const Point> set) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      if (!witnessed(set[i], set[j], set)) return false;
    }
  }
  return true;
}

bool is_satisfied(std::span<const Point> set) {
  bool ok = true;
  sweep_unsatisfied(set, [&](const PointPair&) {
    ok = false;
    return false;
  });
  return ok;
}

std::vector<PointPair> unsatisfied_pairs(std::span<const Point> set) {
  std::vector<PointPair> out;
  sweep_unsatisfied(set, [&](const PointPair& pair) {
    out.push_back(pair);
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

// Formats ----------------------------------------------------------------------

Instance parse_instance(std::string_view text) {
  std::vector<std::int32_t> access;
  std::vector<int> lines;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    ++line_no;
    pos = eol + 1;

    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) {
      line.remove_suffix(1);
    }
    if (line.empty() || line.front() == '#') continue;

    std::int64_t value = 0;
    const auto [end, ec] = std::from_chars(line.data(), line.data() + line.size(), value);
    if (ec != std::errc{} || end != line.data() + line.size() || value < INT_MIN ||
        value > INT_MAX) {
      throw InputError("line " + std::to_string(line_no) + ": expected an integer key, got '" +
                           std::string(line) + "'",
                       line_no);
    }
    access.push_back(static_cast<std::int32_t>(value));
    lines.push_back(line_no);
  }
  validate_permutation(access, lines, "line");
  return Instance(std::move(access));
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open instance file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::string format_instance(const Instance& instance) {
  std::string out;
  for (const std::int32_t key : instance.access()) {
    out += std::to_string(key);
    out += '\n';
  }
  return out;
}

std::string points_to_json(int n, std::span<const Point> points) {
  nlohmann::json doc;
  doc["n"] = n;
  auto& arr = doc["points"] = nlohmann::json::array();
  for (const Point p : points) arr.push_back({p.x, p.y});
  return doc.dump();
}

std::vector<Point> points_from_json(std::string_view text, int* n_out) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
    if (n_out != nullptr) *n_out = doc.at("n").get<int>();
    std::vector<Point> out;
    for (const auto& pt : doc.at("points")) {
      if (!pt.is_array() || pt.size() != 2) throw InputError("point entries must be [x, y]");
      out.push_back({pt[0].get<std::int32_t>(), pt[1].get<std::int32_t>()});
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed point-set JSON: ") + e.what());
  }
}

}  // namespace arbor
