#pragma once

#include <cstdint>

#include "gmt/cantor.hpp"
#include "gmt/geometry.hpp"
#include "gmt/multiscale.hpp"

namespace gmt {

// X(r) = {y : |y - x| < r, |(y - x).omega| <= |y - x| / M}; the query region
// is X(r_outer) minus X(r_inner).
struct SectorQuery {
  Point x;
  Direction omega;
  double r_inner = 0.0;
  double r_outer = 0.0;
  double M = 2.0;
};

bool in_sector(Point y, Point x, Point omega, double r, double M);

// Mass of the cells whose centres lie in X(r_outer) \ X(r_inner). Strict
// mode rejects M <= 1, where the sector is the whole ball.
double sector_mass(const DiscreteMeasure& mu, const SectorQuery& q, bool strict = true);

struct NormalOptions {
  int offset = 1;       // stands in for the index offset 100
  double factor = 10;   // sector aperture M / factor
  double grid_ratio = 1.189207115002721;  // 2^(1/4)
};

struct NormalResult {
  bool normal = false;
  double witness_r = 0.0;
  double witness_mass = 0.0;
  double threshold = 0.0;  // at the witness (or the last tested r)
  int radii_tested = 0;
};

// Normal at level n (1-based): some r in a geometric grid on
// [r_{n+off,-}, r_{n-off,+}] has
//   mu(X(r, M/factor) \ X(r_{n+off,-}, M/factor)) > N^-alpha r / M.
NormalResult is_normal(const DiscreteMeasure& mu, Point x, Direction omega, const ScaleSchedule& schedule, int n,
                       double M, double threshold_alpha, const NormalOptions& opt = {});

// Largest sep-separated subset of E ∩ line (points at distance >= sep).
std::int64_t line_multiplicity(const SquareSet& E, const Line& line, double sep);

// Closed parameter intervals of E ∩ line along omega^perp, merged.
std::vector<Interval> line_sections(const SquareSet& E, const Line& line);

// Mass of cells whose centre projects into [J.lo, J.hi).
double strip_mass(const DiscreteMeasure& mu, Direction omega, Interval J);
// max over windows [t, t + width) of strip_mass / width.
double max_strip_density(const DiscreteMeasure& mu, Direction omega, double width);
// sup over rho >= min_width / 2 of mu(|x.omega - t| <= rho) / (2 rho).
double pushforward_maximal(const DiscreteMeasure& mu, Direction omega, double t, double min_width);

}  // namespace gmt
