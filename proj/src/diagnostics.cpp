#include "gmt/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gmt/error.hpp"

namespace gmt {

bool in_sector(Point y, Point x, Point omega, double r, double M) {
  const double dx = y.x - x.x, dy = y.y - x.y;
  const double d = std::hypot(dx, dy);
  return d < r && std::abs(dx * omega.x + dy * omega.y) <= d / M;
}

double sector_mass(const DiscreteMeasure& mu, const SectorQuery& q, bool strict) {
  if (!(q.r_inner >= 0.0 && q.r_inner < q.r_outer)) throw ConfigError("sector: need 0 <= r_inner < r_outer");
  if (!(q.M > 0.0)) throw ConfigError("sector: M must be positive");
  if (strict && q.M <= 1.0) throw ConfigError("sector: M <= 1 degenerates to the ball (strict mode)");
  const Point w = q.omega.unit();
  const auto& S = mu.support();
  std::size_t count = 0;
  for (const auto& c : S.cells()) {
    Point y = S.cell_center(c);
    if (in_sector(y, q.x, w, q.r_outer, q.M) && !in_sector(y, q.x, w, q.r_inner, q.M)) ++count;
  }
  return static_cast<double>(count) * mu.mass_per_cell();
}

NormalResult is_normal(const DiscreteMeasure& mu, Point x, Direction omega, const ScaleSchedule& schedule, int n,
                       double M, double threshold_alpha, const NormalOptions& opt) {
  if (opt.offset < 0) throw ConfigError("is_normal: offset must be nonnegative");
  if (!(opt.grid_ratio > 1.0)) throw ConfigError("is_normal: grid ratio must exceed 1");
  if (!(opt.factor > 0.0)) throw ConfigError("is_normal: factor must be positive");
  const int N = schedule.N();
  if (n - opt.offset < 1 || n + opt.offset > N)
    throw ConfigError("is_normal: schedule too short (N = " + std::to_string(N) + ") for level " +
                      std::to_string(n) + " with offset " + std::to_string(opt.offset));
  const double r_in = schedule.levels[static_cast<std::size_t>(n + opt.offset - 1)].r_minus;
  const double r_hi = schedule.levels[static_cast<std::size_t>(n - opt.offset - 1)].r_plus;
  const double aperture = M / opt.factor;
  const double scale = std::pow(static_cast<double>(N), -threshold_alpha) / M;

  NormalResult res;
  std::vector<double> radii;
  for (double r = r_in * opt.grid_ratio; r < r_hi; r *= opt.grid_ratio) radii.push_back(r);
  radii.push_back(r_hi);
  for (double r : radii) {
    if (r <= r_in) continue;
    double mass = sector_mass(mu, {x, omega, r_in, r, aperture}, false);
    ++res.radii_tested;
    res.threshold = scale * r;
    if (mass > res.threshold) {
      res.normal = true;
      res.witness_r = r;
      res.witness_mass = mass;
      break;
    }
  }
  return res;
}

std::vector<Interval> line_sections(const SquareSet& E, const Line& line) {
  const Point w = line.omega.unit();
  const Point d = line.omega.normal();
  const Point p0{line.c * w.x, line.c * w.y};
  std::vector<Interval> segs;
  for (const auto& cell : E.cells()) {
    Rect r = E.cell_rect(cell);
    double t0 = -INFINITY, t1 = INFINITY;
    auto slab = [&](double p, double dv, double lo, double hi) {
      if (dv == 0.0) {
        if (p < lo || p > hi) t1 = -INFINITY;
        return;
      }
      double a = (lo - p) / dv, b = (hi - p) / dv;
      if (a > b) std::swap(a, b);
      t0 = std::max(t0, a);
      t1 = std::min(t1, b);
    };
    slab(p0.x, d.x, r.x0, r.x1);
    slab(p0.y, d.y, r.y0, r.y1);
    if (t0 <= t1) segs.push_back({t0, t1});
  }
  std::sort(segs.begin(), segs.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> merged;
  for (const auto& s : segs) {
    if (!merged.empty() && s.lo <= merged.back().hi)
      merged.back().hi = std::max(merged.back().hi, s.hi);
    else
      merged.push_back(s);
  }
  return merged;
}

std::int64_t line_multiplicity(const SquareSet& E, const Line& line, double sep) {
  if (!(sep > 0.0)) throw ConfigError("line_multiplicity: sep must be positive");
  std::int64_t count = 0;
  double last = -INFINITY;
  // leftmost-first greedy is optimal on the line
  for (const auto& s : line_sections(E, line)) {
    double cand = std::max(s.lo, last + sep);
    if (cand > s.hi) continue;
    auto k = static_cast<std::int64_t>(std::floor((s.hi - cand) / sep)) + 1;
    count += k;
    last = cand + static_cast<double>(k - 1) * sep;
  }
  return count;
}

namespace {

std::vector<double> projected_centres(const DiscreteMeasure& mu, Direction omega) {
  const Point w = omega.unit();
  const auto& S = mu.support();
  std::vector<double> p;
  p.reserve(S.size());
  for (const auto& c : S.cells()) {
    Point y = S.cell_center(c);
    p.push_back(y.x * w.x + y.y * w.y);
  }
  std::sort(p.begin(), p.end());
  return p;
}

}  // namespace

double strip_mass(const DiscreteMeasure& mu, Direction omega, Interval J) {
  const Point w = omega.unit();
  const auto& S = mu.support();
  std::size_t count = 0;
  for (const auto& c : S.cells()) {
    Point y = S.cell_center(c);
    double t = y.x * w.x + y.y * w.y;
    count += t >= J.lo && t < J.hi;
  }
  return static_cast<double>(count) * mu.mass_per_cell();
}

double max_strip_density(const DiscreteMeasure& mu, Direction omega, double width) {
  if (!(width > 0.0)) throw ConfigError("max_strip_density: width must be positive");
  auto p = projected_centres(mu, omega);
  // an optimal window can be slid right until its left end hits a centre
  std::size_t best = 0, j = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    j = std::max(j, i);
    while (j < p.size() && p[j] < p[i] + width) ++j;
    best = std::max(best, j - i);
  }
  return static_cast<double>(best) * mu.mass_per_cell() / width;
}

double pushforward_maximal(const DiscreteMeasure& mu, Direction omega, double t, double min_width) {
  if (!(min_width > 0.0)) throw ConfigError("pushforward_maximal: min_width must be positive");
  auto p = projected_centres(mu, omega);
  std::vector<double> d;
  d.reserve(p.size());
  for (double v : p) d.push_back(std::abs(v - t));
  std::sort(d.begin(), d.end());
  const double rho0 = min_width / 2;
  // the ratio only jumps up at rho = d_i, so those and rho0 suffice
  auto inside0 = static_cast<std::size_t>(std::upper_bound(d.begin(), d.end(), rho0) - d.begin());
  double best = static_cast<double>(inside0) / (2 * rho0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] < rho0) continue;
    std::size_t k = i + 1;
    while (k < d.size() && d[k] == d[i]) ++k;
    best = std::max(best, static_cast<double>(k) / (2 * d[i]));
  }
  return best * mu.mass_per_cell();
}

}  // namespace gmt
