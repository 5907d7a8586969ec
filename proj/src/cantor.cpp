#include "gmt/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "gmt/error.hpp"

namespace gmt {

namespace {

// Integer offsets (in units of 4^-n) of the generation-n intervals, sorted.
std::vector<std::int64_t> cantor_offsets(int n) {
  std::vector<std::int64_t> t{0};
  for (int k = 1; k <= n; ++k) {
    std::vector<std::int64_t> next;
    next.reserve(t.size() * 2);
    for (auto v : t) {
      next.push_back(v * 4);
      next.push_back(v * 4 + 3);
    }
    t = std::move(next);
  }
  return t;
}

constexpr std::size_t kMaxCoverHits = std::size_t{1} << 22;

void check_n(int n, int max_n, const char* what, double count) {
  if (n < 0) throw ConfigError(std::string(what) + ": generation must be nonnegative");
  if (n > max_n)
    throw BudgetError(std::string(what) + ": n = " + std::to_string(n) + " needs " +
                      std::to_string(count) + " elements; the configured maximum is n = " +
                      std::to_string(max_n));
}

}  // namespace

IntervalSet cantor_intervals(int n, const CantorLimits& lim) {
  check_n(n, lim.max_interval_n, "cantor_intervals", std::ldexp(1.0, n));
  double s = std::ldexp(1.0, -2 * n);
  std::vector<Interval> raw;
  for (auto t : cantor_offsets(n)) raw.push_back({static_cast<double>(t) * s, static_cast<double>(t + 1) * s});
  return merge_intervals(std::move(raw));
}

SquareSet cantor_squares(int n, const CantorLimits& lim) {
  check_n(n, lim.max_square_n, "cantor_squares", std::ldexp(1.0, 2 * n));
  auto t = cantor_offsets(n);
  std::vector<Cell> cells;
  cells.reserve(t.size() * t.size());
  for (auto y : t)
    for (auto x : t) cells.push_back({x, y});
  return SquareSet(4, n, std::move(cells));
}

SquareSet boundary_squares(int n, int depth, const CantorLimits& lim) {
  if (depth < n) throw ConfigError("boundary_squares: depth must be at least n");
  check_n(n, lim.max_square_n, "boundary_squares", std::ldexp(1.0, 2 * n));
  if (depth > 30) throw BudgetError("boundary_squares: depth beyond 30 overflows cell indices");
  std::int64_t k = std::int64_t{1} << (2 * (depth - n));
  double per = k == 1 ? 1.0 : 4.0 * static_cast<double>(k) - 4.0;
  double total = std::ldexp(per, 2 * n);
  if (total > static_cast<double>(lim.max_cells))
    throw BudgetError("boundary_squares: " + std::to_string(static_cast<long long>(total)) +
                      " cells exceed the budget of " + std::to_string(lim.max_cells));
  auto t = cantor_offsets(n);
  std::vector<Cell> cells;
  cells.reserve(static_cast<std::size_t>(total));
  for (auto y : t)
    for (auto x : t) {
      for (std::int64_t a = 0; a < k; ++a) {
        cells.push_back({x * k + a, y * k});
        if (k > 1) cells.push_back({x * k + a, y * k + k - 1});
      }
      for (std::int64_t b = 1; b + 1 < k; ++b) {
        cells.push_back({x * k, y * k + b});
        cells.push_back({x * k + k - 1, y * k + b});
      }
    }
  return SquareSet(4, depth, std::move(cells));
}

DiscreteMeasure::DiscreteMeasure(SquareSet support, double mass_per_cell)
    : support_(std::move(support)), mass_per_cell_(mass_per_cell) {
  if (!(mass_per_cell > 0.0)) throw ConfigError("mass_per_cell must be positive");
}

DiscreteMeasure DiscreteMeasure::natural_cantor(int n, const CantorLimits& lim) {
  return DiscreteMeasure(cantor_squares(n, lim), std::ldexp(1.0, -2 * n));
}

DiscreteMeasure DiscreteMeasure::area(SquareSet support) {
  double s = support.side();
  return DiscreteMeasure(std::move(support), s * s);
}

ContentCover spherical_content_cover(const SquareSet& E, double r_lo, double r_hi) {
  if (!(r_lo > 0.0) || !std::isfinite(r_hi)) throw ConfigError("content radii must be positive and finite");
  if (r_lo > r_hi) throw ConfigError("content cover needs r_lo <= r_hi");
  if (E.empty()) return {0.0, r_lo, 0, 0.0, {}};

  // radii r_lo * 2^(k/4); the candidate list only grows with r_hi
  std::vector<double> radii;
  for (int k = 0;; ++k) {
    double r = r_lo * std::exp2(k / 4.0);
    if (r > r_hi || k > 4 * 1100) break;
    radii.push_back(r);
  }

  ContentCover best{INFINITY, 0.0, 0, 0.0, {}};
  std::vector<std::pair<std::int64_t, std::int64_t>> hits;
  for (double rho : radii) {
    // a ball of radius rho contains the half-open square of side 1.4 rho
    // centred at its centre
    const double s = 1.4 * rho;
    for (int sx = 0; sx < 3; ++sx)
      for (int sy = 0; sy < 3; ++sy) {
        const double ox = s * sx / 3.0, oy = s * sy / 3.0;
        hits.clear();
        for (const auto& c : E.cells()) {
          Rect r = E.cell_rect(c);
          auto i0 = static_cast<std::int64_t>(std::floor((r.x0 - ox) / s));
          auto i1 = static_cast<std::int64_t>(std::floor((r.x1 - ox) / s));
          auto j0 = static_cast<std::int64_t>(std::floor((r.y0 - oy) / s));
          auto j1 = static_cast<std::int64_t>(std::floor((r.y1 - oy) / s));
          for (auto j = j0; j <= j1; ++j)
            for (auto i = i0; i <= i1; ++i) hits.emplace_back(i, j);
          if (hits.size() > kMaxCoverHits)
            throw BudgetError("content cover: more than " + std::to_string(kMaxCoverHits) +
                              " ball hits at radius " + std::to_string(rho));
        }
        std::sort(hits.begin(), hits.end());
        std::size_t balls = static_cast<std::size_t>(std::unique(hits.begin(), hits.end()) - hits.begin());
        double value = static_cast<double>(balls) * 2.0 * rho;
        if (value < best.value) best = {value, rho, balls, s, {ox, oy}};
      }
  }
  return best;
}

double spherical_content_upper(const SquareSet& E, double r_lo, double r_hi) {
  return spherical_content_cover(E, r_lo, r_hi).value;
}

}  // namespace gmt
