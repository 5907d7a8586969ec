#include "gmt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gmt/error.hpp"

namespace gmt {

double IntervalSet::measure() const {
  double m = 0.0;
  for (const auto& iv : intervals_) m += iv.hi - iv.lo;
  return m;
}

double IntervalSet::measure_within(double lo, double hi) const {
  double m = 0.0;
  for (const auto& iv : intervals_) {
    double a = std::max(lo, iv.lo), b = std::min(hi, iv.hi);
    if (b > a) m += b - a;
  }
  return m;
}

static void check_interval(const Interval& iv) {
  if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi))
    throw ConfigError("interval endpoints must be finite");
  if (!(iv.lo < iv.hi))
    throw ConfigError("interval needs lo < hi, got (" + std::to_string(iv.lo) + ", " +
                      std::to_string(iv.hi) + ")");
}

static bool by_lo(const Interval& a, const Interval& b) {
  return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
}

IntervalSet merge_intervals(std::vector<Interval> raw) {
  for (const auto& iv : raw) check_interval(iv);
  std::sort(raw.begin(), raw.end(), by_lo);
  IntervalSet out;
  for (const auto& iv : raw) {
    if (!out.intervals_.empty() && iv.lo <= out.intervals_.back().hi) {
      out.intervals_.back().hi = std::max(out.intervals_.back().hi, iv.hi);
    } else {
      out.intervals_.push_back(iv);
    }
  }
  return out;
}

double union_measure(std::vector<Interval>& raw) {
  std::sort(raw.begin(), raw.end(), by_lo);
  double m = 0.0;
  std::size_t i = 0;
  while (i < raw.size()) {
    double lo = raw[i].lo, hi = raw[i].hi;
    for (++i; i < raw.size() && raw[i].lo <= hi; ++i) hi = std::max(hi, raw[i].hi);
    m += hi - lo;
  }
  return m;
}

IntervalSet neighborhood(const IntervalSet& s, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("neighborhood radius must be positive");
  std::vector<Interval> grown;
  grown.reserve(s.size());
  for (const auto& iv : s.intervals()) grown.push_back({iv.lo - r, iv.hi + r});
  return merge_intervals(std::move(grown));
}

Direction::Direction(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double t = std::fmod(angle, two_pi);
  if (t < 0.0) t += two_pi;
  if (t >= two_pi) t = 0.0;
  theta = t;
}

// cos(pi/2) evaluates to 6e-17; axis directions should be exact
static double snap(double v) { return std::abs(v) < 1e-15 ? 0.0 : v; }

Point Direction::unit() const { return {snap(std::cos(theta)), snap(std::sin(theta))}; }
Point Direction::normal() const { return {-snap(std::sin(theta)), snap(std::cos(theta))}; }

Rect Rect::clipped(const Rect& o) const {
  return {std::max(x0, o.x0), std::max(y0, o.y0), std::min(x1, o.x1), std::min(y1, o.y1)};
}

double grid_side(int base, int level) {
  if (base < 2) throw ConfigError("grid base must be at least 2");
  if (level < 0) throw ConfigError("grid level must be nonnegative");
  if ((base & (base - 1)) == 0) {
    int bits = 0;
    while ((1 << bits) < base) ++bits;
    return std::ldexp(1.0, -bits * level);
  }
  return 1.0 / std::pow(static_cast<double>(base), level);
}

Rect DyadicSquare::rect() const {
  double s = side();
  return {static_cast<double>(ix) * s, static_cast<double>(iy) * s,
          static_cast<double>(ix + 1) * s, static_cast<double>(iy + 1) * s};
}

Point DyadicSquare::center() const {
  double s = side();
  return {(static_cast<double>(ix) + 0.5) * s, (static_cast<double>(iy) + 0.5) * s};
}

Rect DyadicSquare::tripled() const {
  double s = side();
  return {static_cast<double>(ix - 1) * s, static_cast<double>(iy - 1) * s,
          static_cast<double>(ix + 2) * s, static_cast<double>(iy + 2) * s};
}

static std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > (std::int64_t{1} << 62) / b) throw BudgetError("grid level too deep for 64-bit cell indices");
    r *= b;
  }
  return r;
}

SquareSet::SquareSet(int base, int level, std::vector<Cell> cells)
    : SquareSet(base, level, std::move(cells), Box{0, 0, ipow(base, level) - 1, ipow(base, level) - 1}) {}

SquareSet::SquareSet(int base, int level, std::vector<Cell> cells, Box box)
    : base_(base), level_(level), side_(grid_side(base, level)), box_(box), cells_(std::move(cells)) {
  std::sort(cells_.begin(), cells_.end(), [](const Cell& a, const Cell& b) {
    return a.iy < b.iy || (a.iy == b.iy && a.ix < b.ix);
  });
  cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
  for (const auto& c : cells_) {
    if (c.ix < box_.min_ix || c.ix > box_.max_ix || c.iy < box_.min_iy || c.iy > box_.max_iy)
      throw ConfigError("cell (" + std::to_string(c.ix) + "," + std::to_string(c.iy) +
                        ") outside the declared bounding box");
  }
}

SquareSet SquareSet::unit_square(int base) { return SquareSet(base, 0, {{0, 0}}); }

Rect SquareSet::cell_rect(const Cell& c) const {
  return {static_cast<double>(c.ix) * side_, static_cast<double>(c.iy) * side_,
          static_cast<double>(c.ix + 1) * side_, static_cast<double>(c.iy + 1) * side_};
}

Point SquareSet::cell_center(const Cell& c) const {
  return {(static_cast<double>(c.ix) + 0.5) * side_, (static_cast<double>(c.iy) + 0.5) * side_};
}

bool SquareSet::contains(const Cell& c) const {
  return std::binary_search(cells_.begin(), cells_.end(), c, [](const Cell& a, const Cell& b) {
    return a.iy < b.iy || (a.iy == b.iy && a.ix < b.ix);
  });
}

Rect SquareSet::bounds() const {
  if (cells_.empty()) return {};
  std::int64_t x0 = cells_.front().ix, x1 = x0, y0 = cells_.front().iy, y1 = cells_.back().iy;
  for (const auto& c : cells_) {
    x0 = std::min(x0, c.ix);
    x1 = std::max(x1, c.ix);
  }
  return {static_cast<double>(x0) * side_, static_cast<double>(y0) * side_,
          static_cast<double>(x1 + 1) * side_, static_cast<double>(y1 + 1) * side_};
}

double SquareSet::area() const { return static_cast<double>(cells_.size()) * side_ * side_; }

SquareSet SquareSet::refined(int new_level) const {
  if (new_level < level_) throw ConfigError("refined() cannot coarsen a square set");
  std::int64_t k = ipow(base_, new_level - level_);
  std::vector<Cell> out;
  out.reserve(cells_.size() * static_cast<std::size_t>(k * k));
  for (const auto& c : cells_)
    for (std::int64_t b = 0; b < k; ++b)
      for (std::int64_t a = 0; a < k; ++a) out.push_back({c.ix * k + a, c.iy * k + b});
  Box box{box_.min_ix * k, box_.min_iy * k, (box_.max_ix + 1) * k - 1, (box_.max_iy + 1) * k - 1};
  return SquareSet(base_, new_level, std::move(out), box);
}

bool SquareSet::subset_of(const SquareSet& other) const {
  if (base_ != other.base_) throw ConfigError("subset_of needs a common base");
  if (level_ >= other.level_) {
    std::int64_t k = ipow(base_, level_ - other.level_);
    auto floordiv = [](std::int64_t a, std::int64_t b) { return a >= 0 ? a / b : -((-a + b - 1) / b); };
    for (const auto& c : cells_)
      if (!other.contains({floordiv(c.ix, k), floordiv(c.iy, k)})) return false;
    return true;
  }
  return refined(other.level_).subset_of(other);
}

double cross(Point o, Point a, Point b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end(), [](Point a, Point b) { return a.x == b.x && a.y == b.y; }),
            pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

double min_strip_halfwidth(std::span<const Point> points) {
  std::vector<Point> h = convex_hull({points.begin(), points.end()});
  const std::size_t n = h.size();
  if (n < 3) return 0.0;
  double best = INFINITY;
  std::size_t j = 1;
  for (std::size_t i = 0; i < n; ++i) {
    Point a = h[i], b = h[(i + 1) % n];
    // antipodal vertex for edge (a, b)
    while (cross(a, b, h[(j + 1) % n]) > cross(a, b, h[j])) j = (j + 1) % n;
    double len = std::hypot(b.x - a.x, b.y - a.y);
    best = std::min(best, cross(a, b, h[j]) / len);
  }
  return 0.5 * best;
}

}  // namespace gmt
