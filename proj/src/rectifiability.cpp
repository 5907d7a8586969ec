#include "gmt/rectifiability.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

#include "gmt/error.hpp"
#include "gmt/parallel.hpp"

namespace gmt {

Point Frame::omega1() const { return {std::cos(theta), std::sin(theta)}; }
Point Frame::omega2() const { return {-std::sin(theta), std::cos(theta)}; }

Point Frame::to_world(double u, double v) const {
  Point a = omega1(), b = omega2();
  return {u * a.x + v * b.x, u * a.y + v * b.y};
}

Point Frame::to_frame(Point p) const {
  Point a = omega1(), b = omega2();
  return {p.x * a.x + p.y * a.y, p.x * b.x + p.y * b.y};
}

bool LipschitzPath::lipschitz_ok() const {
  for (std::size_t i = 0; i + 1 < heights.size(); ++i)
    if (std::abs(heights[i + 1] - heights[i]) > M * grid_step * (1.0 + 1e-12)) return false;
  return true;
}

std::vector<Segment> LipschitzPath::segments() const {
  std::vector<Segment> out;
  for (std::size_t i = 0; i + 1 < heights.size(); ++i) {
    double u0 = origin + static_cast<double>(i) * grid_step;
    double u1 = origin + static_cast<double>(i + 1) * grid_step;
    out.push_back({frame.to_world(u0, heights[i]), frame.to_world(u1, heights[i + 1])});
  }
  return out;
}

FrameCoverage::FrameCoverage(const SquareSet& E, Frame frame, double epsilon) : frame_(frame), eps_(epsilon) {
  if (!(epsilon > 0.0)) throw ConfigError("rect: epsilon must be positive");
  hexes_.reserve(E.size());
  u_min_ = INFINITY;
  u_max_ = -INFINITY;
  for (const auto& c : E.cells()) {
    Rect r = E.cell_rect(c);
    std::vector<Point> pts;
    for (Point p : {Point{r.x0, r.y0}, Point{r.x1, r.y0}, Point{r.x0, r.y1}, Point{r.x1, r.y1}}) {
      Point f = frame.to_frame(p);
      pts.push_back({f.x, f.y - epsilon});
      pts.push_back({f.x, f.y + epsilon});
    }
    Hex h;
    h.verts = convex_hull(std::move(pts));
    h.umin = h.vmin = INFINITY;
    h.umax = h.vmax = -INFINITY;
    for (Point p : h.verts) {
      h.umin = std::min(h.umin, p.x);
      h.umax = std::max(h.umax, p.x);
      h.vmin = std::min(h.vmin, p.y);
      h.vmax = std::max(h.vmax, p.y);
    }
    u_min_ = std::min(u_min_, h.umin);
    u_max_ = std::max(u_max_, h.umax);
    hex_height_ = std::max(hex_height_, h.vmax - h.vmin);
    hex_width_ = std::max(hex_width_, h.umax - h.umin);
    hexes_.push_back(std::move(h));
  }
  std::stable_sort(hexes_.begin(), hexes_.end(), [](const Hex& a, const Hex& b) { return a.umin < b.umin; });
  if (hexes_.empty()) u_min_ = u_max_ = 0.0;
}

bool FrameCoverage::v_extent(double u0, double u1, double& vlo, double& vhi) const {
  vlo = INFINITY;
  vhi = -INFINITY;
  for (const auto& h : hexes_) {
    if (h.umin > u1) break;
    if (h.umax < u0) continue;
    vlo = std::min(vlo, h.vmin);
    vhi = std::max(vhi, h.vmax);
  }
  return vlo <= vhi;
}

double FrameCoverage::covered(Point p0, Point p1, const std::vector<std::size_t>& candidates) const {
  const Point d{p1.x - p0.x, p1.y - p0.y};
  std::vector<Interval> ts;
  for (auto idx : candidates) {
    const auto& v = hexes_[idx].verts;
    double t0 = 0.0, t1 = 1.0;
    bool empty = false;
    for (std::size_t i = 0; i < v.size() && !empty; ++i) {
      Point a = v[i], b = v[(i + 1) % v.size()];
      Point e{b.x - a.x, b.y - a.y};
      double num = e.x * (p0.y - a.y) - e.y * (p0.x - a.x);
      double den = e.x * d.y - e.y * d.x;
      if (den == 0.0) {
        empty = num < 0.0;
      } else if (den > 0.0) {
        t0 = std::max(t0, -num / den);
      } else {
        t1 = std::min(t1, -num / den);
      }
      empty = empty || t0 > t1;
    }
    if (!empty && t1 > t0) ts.push_back({t0, t1});
  }
  if (ts.empty()) return 0.0;
  return union_measure(ts) * d.x;
}

double default_height_step(double epsilon) {
  int e = 0;
  std::frexp(epsilon / 2.0, &e);  // epsilon/2 = f 2^e, f in [0.5, 1)
  return std::ldexp(1.0, e - 1);
}

namespace {

void check_query(const RectQuery& q) {
  if (!(q.epsilon > 0.0) || !(q.r > 0.0) || !(q.M > 0.0))
    throw ConfigError("rect: epsilon, r and M must be positive");
}

}  // namespace

RectProblem::RectProblem(const FrameCoverage& cov, const RectQuery& q, int resolution, const RectOptions& opt)
    : cov_(&cov), M_(q.M) {
  check_query(q);
  if (resolution < 2) throw ConfigError("rect: resolution must be at least 2");
  if (q.J.length() < q.r) throw ConfigError("rect: window J shorter than r");
  grid_.u0 = q.J.lo;
  grid_.columns = resolution;
  grid_.step = q.J.length() / resolution;
  grid_.q = opt.height_step > 0.0 ? opt.height_step : default_height_step(q.epsilon);
  double jump = std::floor(q.M * grid_.step / grid_.q);
  grid_.max_jump = static_cast<int>(std::min<double>(jump, std::max(0, opt.max_jump_cap)));
  window_length_ = q.J.length();
  double vlo, vhi;
  if (!cov.v_extent(q.J.lo, q.J.hi, vlo, vhi)) {
    grid_.k_lo = 0;
    grid_.states = 1;
    return;
  }
  // nodes beyond the extent +- max_jump only touch uncovered segments, so
  // clamping them loses nothing
  auto lo = static_cast<std::int64_t>(std::floor(vlo / grid_.q)) - grid_.max_jump;
  auto hi = static_cast<std::int64_t>(std::ceil(vhi / grid_.q)) + grid_.max_jump;
  grid_.k_lo = lo;
  double states = static_cast<double>(hi - lo + 1);
  if (states * resolution > static_cast<double>(opt.state_budget))
    throw BudgetError("rect: " + std::to_string(static_cast<long long>(states)) + " height states x " +
                      std::to_string(resolution) + " columns needs " +
                      std::to_string(static_cast<long long>(states * resolution / 1048576.0) + 1) +
                      " MiB of back-pointers; budget is " + std::to_string(opt.state_budget / 1048576) + " MiB");
  grid_.states = static_cast<int>(states);
}

RectProblem::RectProblem(const FrameCoverage& cov, RectGrid grid, double M)
    : cov_(&cov), grid_(grid), M_(M), window_length_(grid.step * grid.columns) {
  if (grid.columns < 1 || grid.states < 1 || grid.max_jump < 0 || !(grid.q > 0.0) || !(grid.step > 0.0))
    throw ConfigError("rect: malformed explicit grid");
}

std::vector<std::size_t> RectProblem::active_hexes(int column) const {
  const auto& hx = cov_->hexes_;
  const double ua = grid_.u0 + column * grid_.step, ub = grid_.u0 + (column + 1) * grid_.step;
  std::vector<std::size_t> act;
  auto first = std::lower_bound(hx.begin(), hx.end(), ua - cov_->hex_width_,
                                [](const FrameCoverage::Hex& h, double u) { return h.umin < u; });
  for (auto i = static_cast<std::size_t>(first - hx.begin()); i < hx.size() && hx[i].umin <= ub; ++i)
    if (hx[i].umax >= ua) act.push_back(i);
  std::stable_sort(act.begin(), act.end(), [&](std::size_t a, std::size_t b) { return hx[a].vmin < hx[b].vmin; });
  return act;
}

namespace {

struct ColumnContext {
  const FrameCoverage* cov;
  const RectGrid* g;
  std::vector<std::size_t> act;  // sorted by vmin
  double hex_height;
  std::vector<std::size_t> cand;

  double score(int column, int a, int b) {
    const auto& hx = cov->hexes();
    const double va = static_cast<double>(g->k_lo + a) * g->q;
    const double vb = static_cast<double>(g->k_lo + b) * g->q;
    const double lo = std::min(va, vb), hi = std::max(va, vb);
    cand.clear();
    auto it = std::lower_bound(act.begin(), act.end(), lo - hex_height,
                               [&](std::size_t i, double v) { return hx[i].vmin < v; });
    for (; it != act.end() && hx[*it].vmin <= hi; ++it)
      if (hx[*it].vmax >= lo) cand.push_back(*it);
    if (cand.empty()) return 0.0;
    const double ua = g->u0 + column * g->step, ub = g->u0 + (column + 1) * g->step;
    return cov->covered({ua, va}, {ub, vb}, cand);
  }
};

}  // namespace

double RectProblem::score(int column, int a, int b) const {
  ColumnContext ctx{cov_, &grid_, active_hexes(column), cov_->hex_height_, {}};
  return ctx.score(column, a, b);
}

RectEstimate RectProblem::solve(const RectOptions& opt) const {
  const int S = grid_.states, R = grid_.columns, w = grid_.max_jump;
  RectEstimate est;
  est.frames_searched = 1;
  est.windows_searched = 1;
  est.window = {grid_.u0, grid_.u0 + window_length_};
  est.witness.frame = cov_->frame();
  est.witness.origin = grid_.u0;
  est.witness.grid_step = grid_.step;
  est.witness.M = M_;
  if (static_cast<double>(S) * R > static_cast<double>(opt.state_budget))
    throw BudgetError("rect: state space " + std::to_string(S) + " x " + std::to_string(R) + " exceeds budget");
  if (w > 127) throw ConfigError("rect: max jump above 127 is not supported");

  std::vector<double> dp(static_cast<std::size_t>(S), 0.0), nd(dp.size());
  std::vector<int> arg(dp.size());
  std::vector<std::int8_t> back(static_cast<std::size_t>(S) * static_cast<std::size_t>(R));
  std::deque<int> dq;
  ColumnContext ctx{cov_, &grid_, {}, cov_->hex_height_, {}};
  const auto& hx = cov_->hexes();

  for (int c = 0; c < R; ++c) {
    // zero-score moves: sliding-window max, earliest index on ties
    dq.clear();
    int next = 0;
    for (int b = 0; b < S; ++b) {
      for (; next < S && next <= b + w; ++next) {
        while (!dq.empty() && dp[static_cast<std::size_t>(dq.back())] < dp[static_cast<std::size_t>(next)])
          dq.pop_back();
        dq.push_back(next);
      }
      while (dq.front() < b - w) dq.pop_front();
      nd[static_cast<std::size_t>(b)] = dp[static_cast<std::size_t>(dq.front())];
      arg[static_cast<std::size_t>(b)] = dq.front();
    }

    // covered moves, enumerated from the hexagons meeting this column
    ctx.act = active_hexes(c);
    if (!ctx.act.empty()) {
      std::vector<std::pair<int, int>> ranges;
      for (auto i : ctx.act) {
        auto lo = static_cast<std::int64_t>(std::floor(hx[i].vmin / grid_.q)) - w - grid_.k_lo;
        auto hi = static_cast<std::int64_t>(std::ceil(hx[i].vmax / grid_.q)) + w - grid_.k_lo;
        lo = std::max<std::int64_t>(lo, 0);
        hi = std::min<std::int64_t>(hi, S - 1);
        if (lo > hi) continue;
        if (!ranges.empty() && lo <= ranges.back().second + 1)
          ranges.back().second = std::max(ranges.back().second, static_cast<int>(hi));
        else
          ranges.emplace_back(static_cast<int>(lo), static_cast<int>(hi));
      }
      for (auto [alo, ahi] : ranges)
        for (int a = alo; a <= ahi; ++a)
          for (int b = std::max(0, a - w); b <= std::min(S - 1, a + w); ++b) {
            double s = ctx.score(c, a, b);
            if (s <= 0.0) continue;
            double cand = dp[static_cast<std::size_t>(a)] + s;
            auto bi = static_cast<std::size_t>(b);
            if (cand > nd[bi] || (cand == nd[bi] && a < arg[bi])) {
              nd[bi] = cand;
              arg[bi] = a;
            }
          }
    }
    for (int b = 0; b < S; ++b)
      back[static_cast<std::size_t>(c) * S + b] = static_cast<std::int8_t>(arg[static_cast<std::size_t>(b)] - b);
    dp.swap(nd);
  }

  int best = 0;
  for (int b = 1; b < S; ++b)
    if (dp[static_cast<std::size_t>(b)] > dp[static_cast<std::size_t>(best)]) best = b;
  est.lower = std::min(1.0, dp[static_cast<std::size_t>(best)] / window_length_);

  std::vector<double> h(static_cast<std::size_t>(R) + 1);
  int k = best;
  for (int c = R; c >= 0; --c) {
    h[static_cast<std::size_t>(c)] = static_cast<double>(grid_.k_lo + k) * grid_.q;
    if (c > 0) k += back[static_cast<std::size_t>(c - 1) * S + k];
  }
  est.witness.heights = std::move(h);
  return est;
}

RectEstimate rect_lower_dp(const SquareSet& E, const RectQuery& q, Frame frame, int resolution,
                           const RectOptions& opt) {
  check_query(q);
  FrameCoverage cov(E, frame, q.epsilon);
  return RectProblem(cov, q, resolution, opt).solve(opt);
}

RectEstimate rect_lower_sweep(const SquareSet& E, const RectQuery& q, int frame_count, int resolution,
                              const RectOptions& opt) {
  check_query(q);
  if (frame_count < 1) throw ConfigError("rect: frame_count must be at least 1");
  if (!(opt.window_stride > 0.0)) throw ConfigError("rect: window stride must be positive");
  std::vector<FrameCoverage> covs;
  for (int f = 0; f < frame_count; ++f)
    covs.emplace_back(E, Frame{0.5 * std::numbers::pi * f / frame_count}, q.epsilon);

  struct Job {
    int frame;
    double start;
  };
  std::vector<Job> jobs;
  for (int f = 0; f < frame_count; ++f) {
    const auto& cv = covs[static_cast<std::size_t>(f)];
    double a = cv.u_min(), b = cv.u_max();
    if (cv.empty() || b - a <= q.r) {
      jobs.push_back({f, a});
      continue;
    }
    for (int k = 0;; ++k) {
      double s = a + k * opt.window_stride * q.r;
      if (s + q.r >= b) break;
      jobs.push_back({f, s});
    }
    jobs.push_back({f, b - q.r});
  }

  std::vector<RectEstimate> results(jobs.size());
  parallel_for(jobs.size(), opt.threads, [&](std::size_t i) {
    RectQuery w = q;
    w.J = {jobs[i].start, jobs[i].start + q.r};
    RectOptions single = opt;
    single.threads = 1;
    results[i] = RectProblem(covs[static_cast<std::size_t>(jobs[i].frame)], w, resolution, single).solve(single);
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i)
    if (results[i].lower > results[best].lower) best = i;
  RectEstimate out = std::move(results[best]);
  out.frames_searched = frame_count;
  out.windows_searched = static_cast<int>(jobs.size());
  out.length_r_windows_only = true;
  return out;
}

namespace {

UpperBound twoproj_bound(double span, double M, double C, double alpha, double c) {
  UpperBound ub;
  double L = std::log(span);
  ub.value = twoproj_envelope(span, C, alpha);
  if (!(M >= 1.0 && M <= c * std::pow(L, alpha))) {
    ub.hypothesis_ok = false;
    ub.warning = "hypothesis 1 <= M <= c log^alpha(m-l+1) fails for M = " + std::to_string(M);
  }
  return ub;
}

}  // namespace

double twoproj_envelope(double span, double C, double alpha) { return C * std::pow(std::log(span), -alpha); }

UpperBound rect_upper_twoproj(int m, int l, double M, double C, double alpha, double c) {
  if (!(m > l && l >= 0)) throw ConfigError("rect_upper_twoproj: need m > l >= 0");
  return twoproj_bound(static_cast<double>(m - l + 1), M, C, alpha, c);
}

double rect_upper_beta(int m, int l, double M, double C_prime) {
  if (!(m > l)) throw ConfigError("rect_upper_beta: need m > l");
  return C_prime * (1.0 + M) / static_cast<double>(m - l);
}

}  // namespace gmt
