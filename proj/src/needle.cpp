#include "gmt/needle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "gmt/error.hpp"

namespace gmt {

namespace {

bool cell_less(const Cell& a, const Cell& b) { return a.iy < b.iy || (a.iy == b.iy && a.ix < b.ix); }

struct Pyramid {
  int base;
  std::vector<std::vector<Cell>> levels;  // levels[k] occupied cells at level k
  std::vector<double> side;

  explicit Pyramid(const SquareSet& E) : base(E.base()) {
    const int L = E.level();
    levels.resize(static_cast<std::size_t>(L + 1));
    side.resize(levels.size());
    levels[static_cast<std::size_t>(L)].assign(E.cells().begin(), E.cells().end());
    for (int k = L - 1; k >= 0; --k) {
      auto& out = levels[static_cast<std::size_t>(k)];
      for (const auto& c : levels[static_cast<std::size_t>(k + 1)]) out.push_back({c.ix / base, c.iy / base});
      std::sort(out.begin(), out.end(), cell_less);
      out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    for (int k = 0; k <= L; ++k) side[static_cast<std::size_t>(k)] = grid_side(base, k);
  }

  bool occupied(int k, Cell c) const {
    const auto& v = levels[static_cast<std::size_t>(k)];
    return std::binary_search(v.begin(), v.end(), c, cell_less);
  }

  bool hit(int k, Cell c, double ca, double sa, double off) const {
    const double s = side[static_cast<std::size_t>(k)];
    const double x0 = static_cast<double>(c.ix) * s, y0 = static_cast<double>(c.iy) * s;
    double v00 = x0 * ca + y0 * sa, v10 = (x0 + s) * ca + y0 * sa;
    double v01 = x0 * ca + (y0 + s) * sa, v11 = (x0 + s) * ca + (y0 + s) * sa;
    double lo = std::min({v00, v10, v01, v11}), hi = std::max({v00, v10, v01, v11});
    if (off < lo || off > hi) return false;
    if (k + 1 == static_cast<int>(levels.size())) return true;
    for (int b = 0; b < base; ++b)
      for (int a = 0; a < base; ++a) {
        Cell child{c.ix * base + a, c.iy * base + b};
        if (occupied(k + 1, child) && hit(k + 1, child, ca, sa, off)) return true;
      }
    return false;
  }
};

}  // namespace

NeedleEstimate needle_favard(const SquareSet& E, std::int64_t samples, std::uint64_t seed) {
  if (samples < 1) throw ConfigError("needle: need at least one sample");
  NeedleEstimate est;
  est.samples = samples;
  if (E.empty()) return est;
  Pyramid pyr(E);
  Rect b = E.bounds();
  const double cx = 0.5 * (b.x0 + b.x1), cy = 0.5 * (b.y0 + b.y1);
  const double R = 0.5 * std::hypot(b.x1 - b.x0, b.y1 - b.y0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi), unit(-1.0, 1.0);
  std::vector<Cell> roots = pyr.levels[0];
  for (std::int64_t i = 0; i < samples; ++i) {
    double th = angle(rng);
    double ca = std::cos(th), sa = std::sin(th);
    double off = cx * ca + cy * sa + R * unit(rng);
    for (const auto& r : roots)
      if (pyr.hit(0, r, ca, sa, off)) {
        ++est.hits;
        break;
      }
  }
  const double p = static_cast<double>(est.hits) / static_cast<double>(samples);
  est.value = 2.0 * R * p;
  est.std_error = 2.0 * R * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  return est;
}

}  // namespace gmt
