#include "gmt/multiscale.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <limits>

#include "gmt/error.hpp"

namespace gmt {

PigeonholeResult pigeonhole(std::span<const double> masses, double eps) {
  if (masses.size() < 3) throw ConfigError("pigeonhole: need N >= 2 (at least three masses)");
  const int N = static_cast<int>(masses.size()) - 1;
  if (!(eps >= 1.0 / N && eps <= 0.5)) throw ConfigError("pigeonhole: eps must lie in [1/N, 1/2]");
  if (!(masses[0] >= 0.0)) throw ConfigError("pigeonhole: masses must be nonnegative");
  for (std::size_t i = 1; i < masses.size(); ++i)
    if (!(masses[i] >= masses[i - 1])) throw ConfigError("pigeonhole: masses must be nondecreasing");
  const int k = static_cast<int>(std::ceil(eps * N));
  PigeonholeResult best{0, k, masses[static_cast<std::size_t>(k)] - masses[0]};
  for (int n = 1; n + k <= N; ++n) {
    double g = masses[static_cast<std::size_t>(n + k)] - masses[static_cast<std::size_t>(n)];
    if (g < best.gap_mass) best = {n, n + k, g};
  }
  return best;
}

int log_star(double y) {
  if (!(y > 0.0) || !std::isfinite(y)) throw ConfigError("log_star: argument must be positive and finite");
  const long double one = 1.0L + 8.0L * DBL_EPSILON;
  long double v = y;
  int n = 0;
  while (v > one) {
    v = std::log(v);
    ++n;
  }
  return n;
}

double favar_bound(int n, double alpha, double C) {
  if (n < 2) throw ConfigError("favar_bound: need n >= 2");
  int ls = log_star(static_cast<double>(n));
  return ls == 0 ? C : C * std::pow(static_cast<double>(ls), -alpha);
}

bool ScaleSchedule::all_ok() const {
  return std::all_of(certificates.begin(), certificates.end(), [](const Certificate& c) { return c.ok; });
}

namespace {

Certificate make_cert(int level, std::string what, double lhs, double rhs, std::string note = {}) {
  return {level, std::move(what), lhs, rhs, rhs - lhs, lhs <= rhs, std::move(note)};
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ScaleSchedule build_schedule_twoproj(const NbhdOracle& nbhd, double r_min, int N_target) {
  if (!(r_min > 0.0)) throw ConfigError("twoproj schedule: r_min must be positive");
  if (N_target < 0) throw ConfigError("twoproj schedule: N_target must be nonnegative");
  ScaleSchedule s;
  s.mode = ScheduleMode::twoproj;
  double r = 0.5;
  if (r < r_min) throw HypothesisError("twoproj schedule: r_min above r_1 = 1/2");
  s.levels.push_back({r, r});
  std::string blocked;
  while (N_target == 0 || s.N() < N_target) {
    bool found = false;
    for (double c = r / 2; c >= r_min; c /= 2) {
      NbhdValues v = nbhd(c);
      if (v.first <= r && v.second <= r) {
        const int lvl = s.N() + 1;
        s.certificates.push_back(make_cert(lvl, "m(N_r(E_omega)) <= r_prev", v.first, r));
        s.certificates.push_back(make_cert(lvl, "m(N_r(E_omega')) <= r_prev", v.second, r));
        s.certificates.push_back(make_cert(lvl, "r <= r_prev / 2", c, r / 2));
        s.levels.push_back({c, c});
        r = c;
        found = true;
        break;
      }
      if (c == r / 2) {
        blocked = "at r = " + fmt(c) + ": m(N_r(E_omega)) = " + fmt(v.first) + ", m(N_r(E_omega')) = " +
                  fmt(v.second) + " exceed r_prev = " + fmt(r);
      }
    }
    if (!found) break;
  }
  if (s.N() < 2)
    throw HypothesisError("twoproj schedule: no admissible level 2; inequality m(N_{r_2}(E_omega)) <= r_1 " +
                          blocked);
  return s;
}

MainSchedule build_schedule_main(const ContentOracle& content, const RectOracle& rect, const MainOptions& opt) {
  if (!(opt.alpha > 0.0 && opt.alpha <= 1.0)) throw ConfigError("main schedule: alpha must lie in (0, 1]");
  if (!(opt.L > 0.0)) throw ConfigError("main schedule: L must be positive");
  if (opt.N_target < 1) throw ConfigError("main schedule: N_target must be at least 1");
  MainSchedule out;
  auto& s = out.schedule;
  s.mode = ScheduleMode::pairs;
  const double threshold = std::pow(static_cast<double>(opt.N_target), -opt.alpha);

  std::string diag, rect_diag;
  int m = 0;
  for (; m <= opt.m_max; ++m) {
    double r = std::ldexp(1.0, -m);
    double c = 0.0;
    try {
      c = content(r, r);
    } catch (const BudgetError& e) {
      diag += "; scan stopped: " + std::string(e.what());
      break;
    }
    if (c <= opt.L) {
      s.levels.push_back({r, r});
      out.exponents.push_back(m);
      s.certificates.push_back(make_cert(1, "content(r_-, r_+) <= L", c, opt.L));
      break;
    }
    diag = "length bound at r = " + fmt(r) + ": content " + fmt(c) + " > L = " + fmt(opt.L);
  }
  if (s.levels.empty()) throw HypothesisError("main schedule: no first level; " + diag);

  while (s.N() < opt.N_target) {
    const int mp = out.exponents.back();
    const double rp = std::ldexp(1.0, -mp);
    bool found = false;
    for (int mn = mp + 1; mn <= opt.m_max; ++mn) {
      double r = std::ldexp(1.0, -mn);
      double c = 0.0;
      try {
        c = content(r, r);
      } catch (const BudgetError& e) {
        diag += "; scan stopped: " + std::string(e.what());
        break;
      }
      if (c > opt.L) {
        diag = "length bound at r = " + fmt(r) + ": content " + fmt(c) + " > L";
        continue;
      }
      double R = rect(r, rp, 1.0 / rp);
      if (R > threshold) {
        rect_diag = "unrectifiability at r = " + fmt(r) + ": R lower bound " + fmt(R) + " > N^-alpha = " + fmt(threshold);
        continue;
      }
      const int lvl = s.N() + 1;
      s.certificates.push_back(make_cert(lvl, "content(r_-, r_+) <= L", c, opt.L));
      s.certificates.push_back(make_cert(lvl, "r_{n+1,+} <= r_{n,-} / 2", r, rp / 2));
      s.certificates.push_back(make_cert(lvl, "R_E(r_{n+1,+}, r_{n,-}, 1/r_{n,-}) <= N^-alpha", R, threshold,
                                         "checked against a certified lower bound on R_E only"));
      s.levels.push_back({r, r});
      out.exponents.push_back(mn);
      found = true;
      break;
    }
    if (!found) break;
  }
  if (s.N() < std::min(2, opt.N_target))
    throw HypothesisError("main schedule: no admissible second level; last blocking inequality: " + diag +
                          (rect_diag.empty() ? "" : "; last " + rect_diag));

  out.report = {opt.L, s.N(), opt.alpha, opt.C,
                opt.C * std::pow(static_cast<double>(s.N()), -opt.alpha) * opt.L};
  return out;
}

std::vector<std::string> verify_schedule(const ScaleSchedule& s, const NbhdOracle* nbhd) {
  std::vector<std::string> bad;
  const auto& L = s.levels;
  for (std::size_t i = 0; i < L.size(); ++i) {
    const std::string at = "level " + std::to_string(i + 1) + ": ";
    if (!(L[i].r_minus > 0.0 && L[i].r_minus <= L[i].r_plus && L[i].r_plus <= 1.0))
      bad.push_back(at + "chain 0 < r_- <= r_+ <= 1 violated");
    if (i > 0 && !(L[i].r_plus <= L[i - 1].r_minus)) bad.push_back(at + "scales not descending");
    if (i > 0 && !(L[i].r_plus <= 0.5 * L[i - 1].r_minus)) bad.push_back(at + "separation r_+ <= r_prev,- / 2 violated");
    for (double r : {L[i].r_minus, L[i].r_plus}) {
      int e = 0;
      double f = std::frexp(r, &e);
      if (f != 0.5) bad.push_back(at + "scale " + fmt(r) + " is not a power of two");
    }
    if (s.mode == ScheduleMode::twoproj && i > 0 && nbhd) {
      NbhdValues v = (*nbhd)(L[i].r_plus);
      if (!(v.first <= L[i - 1].r_minus && v.second <= L[i - 1].r_minus))
        bad.push_back(at + "small-projection inequality fails on re-evaluation");
    }
  }
  if (s.mode == ScheduleMode::twoproj && !L.empty() && L[0].r_plus != 0.5)
    bad.push_back("level 1: twoproj schedules start at r_1 = 1/2");
  for (const auto& c : s.certificates)
    if (!(c.lhs <= c.rhs) || c.ok != (c.lhs <= c.rhs))
      bad.push_back("certificate '" + c.inequality + "' at level " + std::to_string(c.level) + " does not hold");
  return bad;
}

double admissible_gap_exponent(std::span<const int> exponents, double C) {
  if (!(C > 0.0)) throw ConfigError("gap exponent: C must be positive");
  double p = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j + 1 < exponents.size(); ++j) {
    const double mj = exponents[j], mn = exponents[j + 1];
    if (mj <= 1.0) continue;
    // m_{j+1} >= 2^(C m_j^p)  <=>  p <= log(log2(m_{j+1}) / C) / log(m_j)
    double inner = std::log2(mn) / C;
    double pj = inner > 0.0 ? std::log(inner) / std::log(mj) : -std::numeric_limits<double>::infinity();
    p = std::min(p, pj);
  }
  return p;
}

}  // namespace gmt
