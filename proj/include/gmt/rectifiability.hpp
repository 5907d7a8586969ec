#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gmt/beta.hpp"
#include "gmt/geometry.hpp"

namespace gmt {

// Orthonormal frame (omega1, omega2) = ((cos t, sin t), (-sin t, cos t)).
struct Frame {
  double theta = 0.0;
  Point omega1() const;
  Point omega2() const;
  Point to_world(double u, double v) const;
  Point to_frame(Point p) const;
};

struct LipschitzPath {
  Frame frame;
  double origin = 0.0;     // u of the first node
  double grid_step = 0.0;  // spacing of nodes in u
  double M = 0.0;          // declared slope bound
  std::vector<double> heights;

  bool lipschitz_ok() const;
  std::vector<Segment> segments() const;  // graph in world coordinates
};

struct RectQuery {
  double epsilon = 0.0;
  double r = 0.0;
  double M = 0.0;
  Interval J;  // in frame u-coordinates; length(J) >= r
};

struct RectOptions {
  double height_step = 0.0;  // 0: largest power of two <= epsilon / 2
  int max_jump_cap = 64;     // restricting the path class keeps lower bounds valid
  std::size_t state_budget = std::size_t{1} << 27;  // states x columns
  double window_stride = 0.25;  // sweep windows advance by stride * r
  int threads = 1;
};

struct RectEstimate {
  double lower = 0.0;
  LipschitzPath witness;
  int frames_searched = 0;
  int windows_searched = 0;
  Interval window;
  bool length_r_windows_only = false;
};

// Height grid for one (frame, window): nodes at u0 + i*step, heights k*q.
struct RectGrid {
  double u0 = 0.0;
  double step = 0.0;
  int columns = 0;
  double q = 0.0;
  std::int64_t k_lo = 0;
  int states = 0;
  int max_jump = 0;
};

// Cells of E in a frame, thickened vertically by epsilon (hexagons).
class FrameCoverage {
 public:
  FrameCoverage(const SquareSet& E, Frame frame, double epsilon);

  const Frame& frame() const { return frame_; }
  double epsilon() const { return eps_; }
  bool empty() const { return hexes_.empty(); }
  double u_min() const { return u_min_; }
  double u_max() const { return u_max_; }
  // v-extent of the hexagons whose u-range meets [u0, u1]; false if none.
  bool v_extent(double u0, double u1, double& vlo, double& vhi) const;

  struct Hex {
    double umin, umax, vmin, vmax;
    std::vector<Point> verts;  // counter-clockwise
  };
  const std::vector<Hex>& hexes() const { return hexes_; }  // sorted by umin

  // u-measure of {t in [0,1] : p0 + t (p1 - p0) lies in one of the listed hexagons}.
  double covered(Point p0, Point p1, const std::vector<std::size_t>& candidates) const;

 private:
  Frame frame_;
  double eps_;
  double u_min_ = 0.0, u_max_ = 0.0, hex_height_ = 0.0, hex_width_ = 0.0;
  std::vector<Hex> hexes_;
  friend class RectProblem;
};

class RectProblem {
 public:
  // Grid derived from the query: resolution columns over J, q and max jump
  // from the options, states restricted to the set's v-extent.
  RectProblem(const FrameCoverage& cov, const RectQuery& q, int resolution, const RectOptions& opt = {});
  // Explicit grid (used for exhaustive cross-checks).
  RectProblem(const FrameCoverage& cov, RectGrid grid, double M);

  const RectGrid& grid() const { return grid_; }
  // |J| for query grids, columns * step for explicit ones
  double window_length() const { return window_length_; }
  // Covered u-measure of column c for the move from state a to state b.
  double score(int column, int a, int b) const;
  // Exact maximum over the quantized path class, witness by smallest index.
  RectEstimate solve(const RectOptions& opt = {}) const;

 private:
  std::vector<std::size_t> active_hexes(int column) const;
  const FrameCoverage* cov_;
  RectGrid grid_;
  double M_;
  double window_length_;
};

double default_height_step(double epsilon);

RectEstimate rect_lower_dp(const SquareSet& E, const RectQuery& q, Frame frame, int resolution,
                           const RectOptions& opt = {});
// Max over frame_count frames uniform in [0, pi/2) and length-r windows
// sliding over the frame's u-extent (q.J is not used).
RectEstimate rect_lower_sweep(const SquareSet& E, const RectQuery& q, int frame_count, int resolution,
                              const RectOptions& opt = {});

struct UpperBound {
  double value = 0.0;
  bool hypothesis_ok = true;
  std::string warning;
};

// C log^-alpha(span)
double twoproj_envelope(double span, double C, double alpha);
// C log^-alpha (m - l + 1); hypothesis M <= c log^alpha (m - l + 1).
UpperBound rect_upper_twoproj(int m, int l, double M, double C = 1.0, double alpha = 0.01, double c = 1.0);
// C' (1 + M) / (m - l)
double rect_upper_beta(int m, int l, double M, double C_prime = 1.0);

}  // namespace gmt
