#include "gmt/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gmt/cantor.hpp"
#include "gmt/error.hpp"
#include "gmt/parallel.hpp"

namespace gmt {

namespace {

// Projection of a closed rectangle: the extreme corners are chosen by the
// signs of (c, s) so shared corners of neighbouring cells give identical
// endpoints.
inline Interval project_rect(double x0, double y0, double x1, double y1, double c, double s) {
  double lo = (c >= 0 ? x0 : x1) * c + (s >= 0 ? y0 : y1) * s;
  double hi = (c >= 0 ? x1 : x0) * c + (s >= 0 ? y1 : y0) * s;
  return {lo, hi};
}

}  // namespace

IntervalSet project(const SquareSet& E, Direction theta) {
  Point u = theta.unit();
  std::vector<Interval> raw;
  raw.reserve(E.size());
  for (const auto& cell : E.cells()) {
    Rect r = E.cell_rect(cell);
    raw.push_back(project_rect(r.x0, r.y0, r.x1, r.y1, u.x, u.y));
  }
  return merge_intervals(std::move(raw));
}

ProjectionMeasure::ProjectionMeasure(const SquareSet& E) {
  for (const auto& cell : E.cells()) {
    Rect r = E.cell_rect(cell);
    x0_.push_back(r.x0);
    y0_.push_back(r.y0);
    x1_.push_back(r.x1);
    y1_.push_back(r.y1);
  }
  lo_.resize(x0_.size());
  hi_.resize(x0_.size());
  side_ = E.side();
  if (!E.empty()) {
    Rect b = E.bounds();
    diameter_ = std::hypot(b.x1 - b.x0, b.y1 - b.y0);
  }
}

double ProjectionMeasure::operator()(double theta) {
  const std::size_t n = x0_.size();
  if (n == 0) return 0.0;
  Point u = Direction(theta).unit();
  double gmin = INFINITY, gmax = -INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    Interval iv = project_rect(x0_[i], y0_[i], x1_[i], y1_[i], u.x, u.y);
    lo_[i] = iv.lo;
    hi_[i] = iv.hi;
    gmin = std::min(gmin, iv.lo);
    gmax = std::max(gmax, iv.lo);
  }
  // All cells project to intervals of the same length L. Bucketing the left
  // endpoints at width L/2 makes every bucket a single overlapping cluster,
  // so a scan over buckets reproduces the sorted merge without sorting.
  const double w = 0.5 * side_ * (std::abs(u.x) + std::abs(u.y));
  const double buckets = std::floor((gmax - gmin) / w) + 1.0;
  if (buckets > 8.0 * static_cast<double>(n) + 64.0) {
    std::vector<Interval> raw(n);
    for (std::size_t i = 0; i < n; ++i) raw[i] = {lo_[i], hi_[i]};
    return union_measure(raw);
  }
  const auto nb = static_cast<std::size_t>(buckets);
  bucket_lo_.assign(nb, INFINITY);
  bucket_hi_.assign(nb, -INFINITY);
  for (std::size_t i = 0; i < n; ++i) {
    auto b = std::min(nb - 1, static_cast<std::size_t>((lo_[i] - gmin) / w));
    bucket_lo_[b] = std::min(bucket_lo_[b], lo_[i]);
    bucket_hi_[b] = std::max(bucket_hi_[b], hi_[i]);
  }
  double m = 0.0, clo = 0.0, chi = -INFINITY;
  bool open = false;
  for (std::size_t b = 0; b < nb; ++b) {
    if (bucket_lo_[b] == INFINITY) continue;
    if (open && bucket_lo_[b] <= chi) {
      chi = std::max(chi, bucket_hi_[b]);
    } else {
      if (open) m += chi - clo;
      clo = bucket_lo_[b];
      chi = bucket_hi_[b];
      open = true;
    }
  }
  return m + (chi - clo);
}

namespace {

struct Panel {
  double a, b, fa, fb;
  double error() const { return (b - a) * std::abs(fb - fa) / 2.0; }
};

}  // namespace

FavardEstimate favard(const SquareSet& E, const FavardOptions& opt) {
  if (!(opt.tol > 0.0)) throw ConfigError("favard: tol must be positive");
  if (opt.initial_panels < 1) throw ConfigError("favard: need at least one initial panel");
  FavardEstimate est;
  if (E.empty()) {
    est.per_angle = {{0.0, 0.0}};
    est.angle_count = 1;
    return est;
  }

  const int workers = std::max(1, opt.threads);
  std::vector<ProjectionMeasure> evals(static_cast<std::size_t>(workers), ProjectionMeasure(E));
  const double D = evals[0].diameter();
  const double pi = std::numbers::pi;

  // evaluates f at every angle in `thetas`, results by index
  auto evaluate = [&](const std::vector<double>& thetas) {
    std::vector<double> out(thetas.size());
    const std::size_t per = (thetas.size() + workers - 1) / workers;
    parallel_for(static_cast<std::size_t>(workers), workers, [&](std::size_t w) {
      std::size_t lo = w * per, hi = std::min(thetas.size(), lo + per);
      for (std::size_t i = lo; i < hi; ++i) out[i] = evals[w](thetas[i]);
    });
    return out;
  };

  const int p0 = opt.initial_panels;
  std::vector<double> grid(static_cast<std::size_t>(p0));
  for (int i = 0; i < p0; ++i) grid[static_cast<std::size_t>(i)] = pi * i / p0;
  std::vector<double> fg = evaluate(grid);
  std::vector<Panel> panels;
  for (int i = 0; i < p0; ++i) {
    std::size_t k = static_cast<std::size_t>(i);
    double b = i + 1 == p0 ? pi : grid[k + 1];
    double fb = i + 1 == p0 ? fg[0] : fg[k + 1];  // pi-periodic
    panels.push_back({grid[k], b, fg[k], fb});
  }

  auto curvature = [&](const Panel& p) { return D * (p.b - p.a) * (p.b - p.a) / 4.0; };
  auto total_error = [&] {
    double e = 0.0;
    for (const auto& p : panels) e += p.error() + curvature(p);
    return e / pi;
  };

  for (double err = total_error(); err > opt.tol; err = total_error()) {
    const double mean = err * pi / static_cast<double>(panels.size());
    std::vector<std::size_t> split;
    for (std::size_t i = 0; i < panels.size(); ++i)
      if (panels[i].error() + curvature(panels[i]) >= mean) split.push_back(i);
    if (panels.size() + split.size() > static_cast<std::size_t>(opt.max_panels))
      throw BudgetError("favard: tolerance " + std::to_string(opt.tol) + " not reached within " +
                        std::to_string(opt.max_panels) + " angle panels (current bound " +
                        std::to_string(err) + ")");
    std::vector<double> mids;
    mids.reserve(split.size());
    for (auto i : split) mids.push_back(0.5 * (panels[i].a + panels[i].b));
    std::vector<double> fm = evaluate(mids);
    std::vector<Panel> next;
    next.reserve(panels.size() + split.size());
    std::size_t s = 0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      if (s < split.size() && split[s] == i) {
        const Panel& p = panels[i];
        double m = mids[s];
        next.push_back({p.a, m, p.fa, fm[s]});
        next.push_back({m, p.b, fm[s], p.fb});
        ++s;
      } else {
        next.push_back(panels[i]);
      }
    }
    panels = std::move(next);
  }

  double integral = 0.0;
  for (const auto& p : panels) integral += (p.b - p.a) * (p.fa + p.fb) / 2.0;
  est.value = integral / pi;
  est.error_bound = total_error();
  est.angle_count = static_cast<int>(panels.size());
  est.per_angle.reserve(panels.size());
  for (const auto& p : panels) est.per_angle.push_back({p.a, p.fa});
  return est;
}

PowerFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw ConfigError("linear_fit needs at least two paired samples");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  PowerFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0 && sxx > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

FavardTable favard_table(int n_max, const FavardOptions& opt) {
  if (n_max < 0) throw ConfigError("favard_table: n_max must be nonnegative");
  FavardTable t;
  for (int n = 0; n <= n_max; ++n) t.rows.push_back({n, favard(cantor_squares(n), opt)});
  std::vector<double> lx, ly;
  for (const auto& r : t.rows)
    if (r.n >= 1 && r.estimate.value > 0) {
      lx.push_back(std::log(static_cast<double>(r.n)));
      ly.push_back(std::log(r.estimate.value));
    }
  if (lx.size() >= 2) t.tail = linear_fit(lx, ly);
  return t;
}

}  // namespace gmt
