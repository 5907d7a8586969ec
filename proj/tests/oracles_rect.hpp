#pragma once

// Exhaustive path enumeration and sampled coverage for the rect DP.

#include <algorithm>
#include <cmath>
#include <vector>

#include "gmt/rectifiability.hpp"

namespace oracle {

// Max over every height sequence k_0..k_R with |k_{c+1} - k_c| <= max_jump of
// the summed column scores, divided by the window length and capped at 1.
// Scores accumulate left to right like the DP so ties are bit-exact.
inline double exhaustive_rect(const gmt::RectProblem& P) {
  const auto& g = P.grid();
  const int S = g.states, R = g.columns, w = g.max_jump;
  std::vector<double> table(std::size_t(R) * S * S, 0.0);
  for (int c = 0; c < R; ++c)
    for (int a = 0; a < S; ++a)
      for (int b = std::max(0, a - w); b <= std::min(S - 1, a + w); ++b)
        table[(std::size_t(c) * S + a) * S + b] = P.score(c, a, b);
  double best = 0.0;
  std::vector<int> k(std::size_t(R) + 1);
  std::vector<double> acc(std::size_t(R) + 1, 0.0);
  // depth-first over all paths
  auto rec = [&](auto&& self, int c) -> void {
    if (c == R) {
      best = std::max(best, acc[std::size_t(R)]);
      return;
    }
    int a = k[std::size_t(c)];
    for (int b = std::max(0, a - w); b <= std::min(S - 1, a + w); ++b) {
      k[std::size_t(c) + 1] = b;
      double s = table[(std::size_t(c) * S + a) * S + b];
      acc[std::size_t(c) + 1] = s > 0.0 ? acc[std::size_t(c)] + s : acc[std::size_t(c)];
      self(self, c + 1);
    }
  };
  for (int s0 = 0; s0 < S; ++s0) {
    k[0] = s0;
    rec(rec, 0);
  }
  return std::min(1.0, best / P.window_length());
}

// Is the frame point (u, v) within vertical distance eps of a cell of E?
inline bool thick_hit(const gmt::SquareSet& E, const gmt::Frame& f, double u, double v, double eps) {
  gmt::Point a = f.to_world(u, v - eps), b = f.to_world(u, v + eps);
  for (auto c : E.cells()) {
    gmt::Rect r = E.cell_rect(c);
    double t0 = 0, t1 = 1;
    bool ok = true;
    auto slab = [&](double p, double d, double lo, double hi) {
      if (d == 0) {
        ok = ok && p >= lo && p <= hi;
        return;
      }
      double x = (lo - p) / d, y = (hi - p) / d;
      if (x > y) std::swap(x, y);
      t0 = std::max(t0, x);
      t1 = std::min(t1, y);
    };
    slab(a.x, b.x - a.x, r.x0, r.x1);
    slab(a.y, b.y - a.y, r.y0, r.y1);
    if (ok && t0 <= t1) return true;
  }
  return false;
}

// Midpoint-rule covered u-length of the frame segment (u0,v0)-(u1,v1).
inline double sampled_cover(const gmt::SquareSet& E, const gmt::Frame& f, double eps, double u0, double v0,
                            double u1, double v1, int samples) {
  int hit = 0;
  for (int i = 0; i < samples; ++i) {
    double t = (i + 0.5) / samples;
    hit += thick_hit(E, f, u0 + t * (u1 - u0), v0 + t * (v1 - v0), eps);
  }
  return (u1 - u0) * hit / samples;
}

}  // namespace oracle
