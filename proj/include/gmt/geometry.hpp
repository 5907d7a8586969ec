#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace gmt {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Open interval (lo, hi) with lo < hi.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Sorted, pairwise disjoint open intervals with strictly positive gaps.
class IntervalSet {
 public:
  IntervalSet() = default;

  std::span<const Interval> intervals() const { return intervals_; }
  std::size_t size() const { return intervals_.size(); }
  bool empty() const { return intervals_.empty(); }
  double measure() const;
  // Measure of the part inside [lo, hi].
  double measure_within(double lo, double hi) const;

  friend IntervalSet merge_intervals(std::vector<Interval> raw);
  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  std::vector<Interval> intervals_;
};

IntervalSet merge_intervals(std::vector<Interval> raw);
IntervalSet neighborhood(const IntervalSet& s, double r);
// Sum of lengths of a union, for callers that only need the measure.
// Sorts `raw` in place.
double union_measure(std::vector<Interval>& raw);

struct Direction {
  double theta = 0.0;  // in [0, 2pi)

  Direction() = default;
  explicit Direction(double angle);
  Point unit() const;
  Point normal() const;  // unit rotated by +pi/2
};

// {x : x . omega = c}
struct Line {
  double c = 0.0;
  Direction omega;
};

// Closed axis-aligned rectangle.
struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
  bool intersects(const Rect& o) const {
    return x0 <= o.x1 && o.x0 <= x1 && y0 <= o.y1 && o.y0 <= y1;
  }
  Rect clipped(const Rect& o) const;
};

// side = base^-level for base a power of two this is exact.
double grid_side(int base, int level);

struct DyadicSquare {
  int base = 2;
  int level = 0;
  std::int64_t ix = 0;
  std::int64_t iy = 0;

  double side() const { return grid_side(base, level); }
  Rect rect() const;
  Point center() const;
  // Same centre, three times the side.
  Rect tripled() const;
};

struct Cell {
  std::int64_t ix = 0;
  std::int64_t iy = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

// Union of grid cells of side base^-level. Cells are stored sorted (iy, ix)
// and unique, and lie in the box [0, base^level)^2 unless a box is given.
class SquareSet {
 public:
  struct Box {
    std::int64_t min_ix, min_iy, max_ix, max_iy;  // inclusive
  };

  SquareSet() = default;
  SquareSet(int base, int level, std::vector<Cell> cells);
  SquareSet(int base, int level, std::vector<Cell> cells, Box box);

  static SquareSet unit_square(int base = 4);

  int base() const { return base_; }
  int level() const { return level_; }
  double side() const { return side_; }
  std::span<const Cell> cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }
  const Box& box() const { return box_; }

  Rect cell_rect(const Cell& c) const;
  Point cell_center(const Cell& c) const;
  bool contains(const Cell& c) const;
  // Bounding rectangle of the occupied cells (zero rect when empty).
  Rect bounds() const;
  double area() const;

  // Same point set at a finer level (same base).
  SquareSet refined(int new_level) const;
  // Point-set inclusion this ⊆ other (same base).
  bool subset_of(const SquareSet& other) const;

  friend bool operator==(const SquareSet& a, const SquareSet& b) {
    return a.base_ == b.base_ && a.level_ == b.level_ && a.cells_ == b.cells_;
  }

 private:
  int base_ = 4;
  int level_ = 0;
  double side_ = 1.0;
  Box box_{0, 0, 0, 0};
  std::vector<Cell> cells_;
};

double cross(Point o, Point a, Point b);
std::vector<Point> convex_hull(std::vector<Point> pts);
// Half the minimal width of the convex hull; 0 for fewer than three
// non-collinear points.
double min_strip_halfwidth(std::span<const Point> points);

}  // namespace gmt
