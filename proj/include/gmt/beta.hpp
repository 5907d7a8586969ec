#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gmt/geometry.hpp"

namespace gmt {

struct Segment {
  Point a, b;
};

// Closed segment clipped to a closed rectangle.
std::optional<Segment> clip_segment(const Segment& s, const Rect& r);

// Points of K inside the closed rectangle R whose convex hull equals that
// of K ∩ R (corners of clipped cells, clipped segment endpoints).
std::vector<Point> extreme_points(const SquareSet& K, const Rect& R);
std::vector<Point> extreme_points(std::span<const Point> K, const Rect& R);
std::vector<Point> extreme_points(std::span<const Segment> K, const Rect& R);

// (2 / diam R) inf_l sup_{x in K ∩ R} dist(x, l) for a square R.
double beta_in(std::span<const Point> pts_in_R, const Rect& R);

struct BetaResult {
  DyadicSquare square;
  double beta = 0.0;
  std::size_t witness_points = 0;
};

// beta of K on the tripled square 3Q.
BetaResult beta_number(const SquareSet& K, const DyadicSquare& Q);
BetaResult beta_number(std::span<const Point> K, const DyadicSquare& Q);
BetaResult beta_number(std::span<const Segment> K, const DyadicSquare& Q);

struct LevelPartial {
  int level;
  double partial;
  std::size_t squares;
};

struct JonesSum {
  double total = 0.0;
  std::vector<LevelPartial> per_level;
  int truncation_level = 0;
};

struct JonesOptions {
  int max_level = 8;
  int depth_budget = 24;
  int threads = 1;
};

// Sum over base-2 squares Q of levels 0..max_level of beta_K(3Q)^2 l(Q).
// Only squares whose 3Q meets K are visited; the rest have beta = 0.
JonesSum jones_sum(const SquareSet& K, const JonesOptions& opt);
JonesSum jones_sum(std::span<const Segment> K, const JonesOptions& opt);

// Polyline through the given vertices.
std::vector<Segment> polyline(std::span<const Point> vertices);

struct DeficitLevel {
  int level;
  std::size_t occupied = 0;
  std::size_t flat = 0;
  std::size_t fully_occupied = 0;
  std::size_t flat_losing = 0;  // flat and missing a descendant
  std::size_t violations = 0;   // flat yet fully occupied
  std::size_t below_desk = 0;   // fully occupied with beta below the desk threshold
  double min_beta_full = 1.0;   // over fully occupied squares
};

struct DeficitReport {
  int n = 0;
  int offset = 0;
  double flat_threshold = 0.01;
  double desk_threshold = 0.0;
  std::size_t finest_count = 0;  // |E_n|
  double measure_estimate = 0.0;  // |E_n| 4^-n
  std::vector<DeficitLevel> levels;
  std::size_t total_violations() const;
};

// Certified lower bound for beta(3Q) when a set meets all four corner
// descendants `offset` levels down (base 4): (1 - 2 4^-offset) / (3 sqrt 2).
double desk_threshold(int offset);

// E = graph ∩ (K_n x K_n), classified at every Cantor level j <= n - offset.
DeficitReport square_count_deficit(int n, int offset, std::span<const Segment> graph, int threads = 1);
// E = the given level-n Cantor cells themselves.
DeficitReport square_count_deficit(int n, int offset, const SquareSet& cells, int threads = 1);

}  // namespace gmt
