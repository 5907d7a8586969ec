#include "gmt/beta.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gmt/cantor.hpp"
#include "gmt/error.hpp"
#include "gmt/parallel.hpp"

namespace gmt {

std::optional<Segment> clip_segment(const Segment& s, const Rect& r) {
  // Liang-Barsky on the closed rectangle
  double t0 = 0.0, t1 = 1.0;
  const double dx = s.b.x - s.a.x, dy = s.b.y - s.a.y;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {s.a.x - r.x0, r.x1 - s.a.x, s.a.y - r.y0, r.y1 - s.a.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return std::nullopt;
      continue;
    }
    double t = q[i] / p[i];
    if (p[i] < 0.0) t0 = std::max(t0, t);
    else t1 = std::min(t1, t);
  }
  if (t0 > t1) return std::nullopt;
  auto at = [&](double t) -> Point {
    if (t == 0.0) return s.a;
    if (t == 1.0) return s.b;
    Point p{s.a.x + t * dx, s.a.y + t * dy};
    // keep clipped endpoints inside the closed rectangle
    p.x = std::clamp(p.x, r.x0, r.x1);
    p.y = std::clamp(p.y, r.y0, r.y1);
    return p;
  };
  return Segment{at(t0), at(t1)};
}

namespace {

bool cell_less(const Cell& a, const Cell& b) { return a.iy < b.iy || (a.iy == b.iy && a.ix < b.ix); }

// Index range of grid cells of side s whose closed extent meets [lo, hi].
std::pair<std::int64_t, std::int64_t> cell_range(double lo, double hi, double s) {
  return {static_cast<std::int64_t>(std::ceil(lo / s)) - 1, static_cast<std::int64_t>(std::floor(hi / s))};
}

template <class Fn>
void for_cells_meeting(const SquareSet& K, const Rect& R, Fn&& fn) {
  const double s = K.side();
  auto [ix0, ix1] = cell_range(R.x0, R.x1, s);
  auto [iy0, iy1] = cell_range(R.y0, R.y1, s);
  auto cells = K.cells();
  for (auto iy = iy0; iy <= iy1; ++iy) {
    auto it = std::lower_bound(cells.begin(), cells.end(), Cell{ix0, iy}, cell_less);
    for (; it != cells.end() && it->iy == iy && it->ix <= ix1; ++it) {
      Rect c = K.cell_rect(*it);
      if (c.intersects(R)) fn(*it, c);
    }
  }
}

}  // namespace

std::vector<Point> extreme_points(const SquareSet& K, const Rect& R) {
  std::vector<Point> pts;
  for_cells_meeting(K, R, [&](const Cell&, const Rect& c) {
    Rect k = c.clipped(R);
    pts.push_back({k.x0, k.y0});
    pts.push_back({k.x1, k.y0});
    pts.push_back({k.x0, k.y1});
    pts.push_back({k.x1, k.y1});
  });
  return pts;
}

std::vector<Point> extreme_points(std::span<const Point> K, const Rect& R) {
  std::vector<Point> pts;
  for (const auto& p : K)
    if (p.x >= R.x0 && p.x <= R.x1 && p.y >= R.y0 && p.y <= R.y1) pts.push_back(p);
  return pts;
}

std::vector<Point> extreme_points(std::span<const Segment> K, const Rect& R) {
  std::vector<Point> pts;
  for (const auto& s : K)
    if (auto c = clip_segment(s, R)) {
      pts.push_back(c->a);
      pts.push_back(c->b);
    }
  return pts;
}

double beta_in(std::span<const Point> pts, const Rect& R) {
  double diam = std::hypot(R.x1 - R.x0, R.y1 - R.y0);
  if (pts.empty() || diam <= 0.0) return 0.0;
  return std::min(1.0, 2.0 * min_strip_halfwidth(pts) / diam);
}

namespace {

template <class K>
BetaResult beta_generic(const K& k, const DyadicSquare& Q) {
  if (!(Q.side() > 0.0)) throw ConfigError("beta_number: square side must be positive");
  Rect R = Q.tripled();
  std::vector<Point> pts = extreme_points(k, R);
  return {Q, beta_in(pts, R), pts.size()};
}

}  // namespace

BetaResult beta_number(const SquareSet& K, const DyadicSquare& Q) { return beta_generic(K, Q); }
BetaResult beta_number(std::span<const Point> K, const DyadicSquare& Q) { return beta_generic(K, Q); }
BetaResult beta_number(std::span<const Segment> K, const DyadicSquare& Q) { return beta_generic(K, Q); }

namespace {

// base-2 squares at `level` whose closed 3Q meets the closed rectangle r
void squares_near(const Rect& r, double s, std::vector<Cell>& out) {
  auto ix0 = static_cast<std::int64_t>(std::ceil(r.x0 / s)) - 2;
  auto ix1 = static_cast<std::int64_t>(std::floor(r.x1 / s)) + 1;
  auto iy0 = static_cast<std::int64_t>(std::ceil(r.y0 / s)) - 2;
  auto iy1 = static_cast<std::int64_t>(std::floor(r.y1 / s)) + 1;
  for (auto iy = iy0; iy <= iy1; ++iy)
    for (auto ix = ix0; ix <= ix1; ++ix) out.push_back({ix, iy});
}

template <class K, class Enumerate>
JonesSum jones_generic(const K& k, const JonesOptions& opt, Enumerate&& enumerate) {
  if (opt.max_level < 0) throw ConfigError("jones_sum: max_level must be nonnegative");
  if (opt.max_level > opt.depth_budget)
    throw BudgetError("jones_sum: max_level " + std::to_string(opt.max_level) + " exceeds the depth budget " +
                      std::to_string(opt.depth_budget));
  JonesSum js;
  js.truncation_level = opt.max_level;
  for (int j = 0; j <= opt.max_level; ++j) {
    const double s = std::ldexp(1.0, -j);
    std::vector<Cell> sq;
    enumerate(s, sq);
    std::sort(sq.begin(), sq.end(), cell_less);
    sq.erase(std::unique(sq.begin(), sq.end()), sq.end());
    std::vector<double> terms(sq.size());
    parallel_for(sq.size(), opt.threads, [&](std::size_t i) {
      double b = beta_generic(k, DyadicSquare{2, j, sq[i].ix, sq[i].iy}).beta;
      terms[i] = b * b * s;
    });
    double partial = 0.0;
    for (double t : terms) partial += t;
    js.per_level.push_back({j, partial, sq.size()});
    js.total += partial;
  }
  return js;
}

}  // namespace

JonesSum jones_sum(const SquareSet& K, const JonesOptions& opt) {
  return jones_generic(K, opt, [&](double s, std::vector<Cell>& out) {
    // cells sharing a parent at this level give the same neighbourhood
    const double ks = K.side();
    std::vector<Cell> parents;
    for (const auto& c : K.cells()) {
      Rect r = K.cell_rect(c);
      if (ks >= s) {
        squares_near(r, s, out);
      } else {
        parents.push_back({static_cast<std::int64_t>(std::floor(r.x0 / s)),
                           static_cast<std::int64_t>(std::floor(r.y0 / s))});
      }
    }
    std::sort(parents.begin(), parents.end(), cell_less);
    parents.erase(std::unique(parents.begin(), parents.end()), parents.end());
    for (const auto& p : parents) {
      double x0 = static_cast<double>(p.ix) * s, y0 = static_cast<double>(p.iy) * s;
      squares_near({x0, y0, x0 + s, y0 + s}, s, out);
    }
  });
}

JonesSum jones_sum(std::span<const Segment> K, const JonesOptions& opt) {
  return jones_generic(K, opt, [&](double s, std::vector<Cell>& out) {
    for (const auto& seg : K) {
      // walk the columns of the 3Q grid crossed by the segment
      double xa = std::min(seg.a.x, seg.b.x), xb = std::max(seg.a.x, seg.b.x);
      auto ix0 = static_cast<std::int64_t>(std::ceil(xa / s)) - 2;
      auto ix1 = static_cast<std::int64_t>(std::floor(xb / s)) + 1;
      for (auto ix = ix0; ix <= ix1; ++ix) {
        Rect col{static_cast<double>(ix - 1) * s, -INFINITY, static_cast<double>(ix + 2) * s, INFINITY};
        double lo = seg.a.x == seg.b.x ? std::min(seg.a.y, seg.b.y) : INFINITY;
        double hi = seg.a.x == seg.b.x ? std::max(seg.a.y, seg.b.y) : -INFINITY;
        if (seg.a.x != seg.b.x) {
          double t0 = (std::max(col.x0, xa) - seg.a.x) / (seg.b.x - seg.a.x);
          double t1 = (std::min(col.x1, xb) - seg.a.x) / (seg.b.x - seg.a.x);
          for (double t : {t0, t1}) {
            t = std::clamp(t, 0.0, 1.0);
            double y = seg.a.y + t * (seg.b.y - seg.a.y);
            lo = std::min(lo, y);
            hi = std::max(hi, y);
          }
        }
        auto iy0 = static_cast<std::int64_t>(std::ceil(lo / s)) - 2;
        auto iy1 = static_cast<std::int64_t>(std::floor(hi / s)) + 1;
        for (auto iy = iy0; iy <= iy1; ++iy) out.push_back({ix, iy});
      }
    }
  });
}

std::vector<Segment> polyline(std::span<const Point> v) {
  std::vector<Segment> out;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) out.push_back({v[i], v[i + 1]});
  return out;
}

std::size_t DeficitReport::total_violations() const {
  std::size_t v = 0;
  for (const auto& l : levels) v += l.violations;
  return v;
}

double desk_threshold(int offset) {
  return (1.0 - 2.0 * std::ldexp(1.0, -2 * offset)) / (3.0 * std::sqrt(2.0));
}

namespace {

std::vector<std::int64_t> digit_offsets(int levels) {
  std::vector<std::int64_t> t{0};
  for (int k = 0; k < levels; ++k) {
    std::vector<std::int64_t> next;
    for (auto v : t) {
      next.push_back(4 * v);
      next.push_back(4 * v + 3);
    }
    t = std::move(next);
  }
  return t;
}

template <class BetaOf>
DeficitReport deficit_core(int n, int offset, std::vector<Cell> finest, BetaOf&& beta_of, int threads) {
  if (offset < 1) throw ConfigError("square_count_deficit: offset must be at least 1");
  if (n < offset) throw ConfigError("square_count_deficit: need n >= offset");
  DeficitReport rep;
  rep.n = n;
  rep.offset = offset;
  rep.desk_threshold = desk_threshold(offset);
  rep.finest_count = finest.size();
  rep.measure_estimate = static_cast<double>(finest.size()) * std::ldexp(1.0, -2 * n);

  // E_j for every level j
  std::vector<std::vector<Cell>> E(static_cast<std::size_t>(n + 1));
  E[static_cast<std::size_t>(n)] = std::move(finest);
  for (int j = n - 1; j >= 0; --j) {
    auto& out = E[static_cast<std::size_t>(j)];
    for (const auto& c : E[static_cast<std::size_t>(j + 1)]) out.push_back({c.ix / 4, c.iy / 4});
    std::sort(out.begin(), out.end(), cell_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  const auto digits = digit_offsets(offset);
  const std::int64_t scale = std::int64_t{1} << (2 * offset);

  for (int j = 0; j + offset <= n; ++j) {
    const auto& Ej = E[static_cast<std::size_t>(j)];
    const auto& Ejo = E[static_cast<std::size_t>(j + offset)];
    DeficitLevel lvl;
    lvl.level = j;
    lvl.occupied = Ej.size();
    std::vector<double> betas(Ej.size());
    parallel_for(Ej.size(), threads, [&](std::size_t i) {
      betas[i] = beta_of(DyadicSquare{4, j, Ej[i].ix, Ej[i].iy});
    });
    for (std::size_t i = 0; i < Ej.size(); ++i) {
      bool full = true;
      for (auto dy : digits)
        for (auto dx : digits)
          full = full && std::binary_search(Ejo.begin(), Ejo.end(),
                                            Cell{Ej[i].ix * scale + dx, Ej[i].iy * scale + dy}, cell_less);
      const bool flat = betas[i] < rep.flat_threshold;
      lvl.flat += flat;
      lvl.fully_occupied += full;
      lvl.flat_losing += flat && !full;
      lvl.violations += flat && full;
      if (full) {
        lvl.min_beta_full = std::min(lvl.min_beta_full, betas[i]);
        lvl.below_desk += betas[i] < rep.desk_threshold;
      }
    }
    rep.levels.push_back(lvl);
  }
  return rep;
}

}  // namespace

DeficitReport square_count_deficit(int n, int offset, std::span<const Segment> graph, int threads) {
  SquareSet K = cantor_squares(n);
  std::vector<Cell> finest;
  std::vector<Segment> pieces;
  for (const auto& seg : graph) {
    Rect box{std::min(seg.a.x, seg.b.x), std::min(seg.a.y, seg.b.y), std::max(seg.a.x, seg.b.x),
             std::max(seg.a.y, seg.b.y)};
    for_cells_meeting(K, box, [&](const Cell& c, const Rect& r) {
      if (auto piece = clip_segment(seg, r)) {
        finest.push_back(c);
        pieces.push_back(*piece);
      }
    });
  }
  std::sort(finest.begin(), finest.end(), cell_less);
  finest.erase(std::unique(finest.begin(), finest.end()), finest.end());
  return deficit_core(
      n, offset, std::move(finest),
      [&](const DyadicSquare& Q) { return beta_number(std::span<const Segment>(pieces), Q).beta; }, threads);
}

DeficitReport square_count_deficit(int n, int offset, const SquareSet& cells, int threads) {
  if (cells.base() != 4 || cells.level() != n)
    throw ConfigError("square_count_deficit: cells must be base-4 level-n");
  SquareSet K = cantor_squares(n);
  if (!cells.subset_of(K)) throw ConfigError("square_count_deficit: cells must lie in K_n x K_n");
  std::vector<Cell> finest(cells.cells().begin(), cells.cells().end());
  return deficit_core(
      n, offset, std::move(finest), [&](const DyadicSquare& Q) { return beta_number(cells, Q).beta; },
      threads);
}

}  // namespace gmt
