#pragma once

#include <vector>

#include "gmt/geometry.hpp"

namespace gmt {

IntervalSet project(const SquareSet& E, Direction theta);

// Reusable per-angle evaluator for m(proj_theta E); keeps scratch buffers.
class ProjectionMeasure {
 public:
  explicit ProjectionMeasure(const SquareSet& E);
  double operator()(double theta);
  // Largest attainable projection length: diameter of the bounding box.
  double diameter() const { return diameter_; }

 private:
  std::vector<double> x0_, y0_, x1_, y1_;
  std::vector<double> lo_, hi_, bucket_lo_, bucket_hi_;
  double side_ = 0.0;
  double diameter_ = 0.0;
};

struct AngleSample {
  double theta;
  double measure;
};

struct FavardEstimate {
  double value = 0.0;
  double error_bound = 0.0;
  int angle_count = 0;
  std::vector<AngleSample> per_angle;
};

struct FavardOptions {
  double tol = 1e-3;
  int initial_panels = 256;
  int max_panels = 1 << 18;
  int threads = 1;
};

// (1/pi) * integral over [0, pi) of m(proj_theta E) by adaptive trapezoid
// refinement. Per panel of width h the error is bounded by
//   h |f(b) - f(a)| / 2 + D h^2 / 4,   D = diam(bbox E),
// the two-point variation term plus the curvature of a convex hull's width
// function; exact for convex E, an estimate for unions.
FavardEstimate favard(const SquareSet& E, const FavardOptions& opt);

struct FavardRow {
  int n;
  FavardEstimate estimate;
};

struct PowerFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

struct FavardTable {
  std::vector<FavardRow> rows;
  PowerFit tail;  // log Fav against log n over rows n >= 1
};

FavardTable favard_table(int n_max, const FavardOptions& opt);

// Least squares y = slope * x + intercept.
PowerFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace gmt
