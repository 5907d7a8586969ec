#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace gmt {

struct PigeonholeResult {
  int n = 0;
  int m = 0;
  double gap_mass = 0.0;
};

// Among all n with m - n = ceil(eps N), the pair minimising masses[m] -
// masses[n] (smallest n on ties). Guarantees gap_mass <= 4 eps masses[N].
PigeonholeResult pigeonhole(std::span<const double> masses, double eps);

// min { n >= 0 : log^(n) y <= 1 }. Iterates in long double and treats values
// within 8 double ulps of 1 as 1, so roundings of e and e^e land on 1 and 2.
int log_star(double y);

// C (log_* n)^-alpha, with log_* n = 0 mapped to C.
double favar_bound(int n, double alpha, double C = 1.0);

enum class ScheduleMode { pairs, twoproj };

struct ScaleLevel {
  double r_minus = 0.0;
  double r_plus = 0.0;
};

struct Certificate {
  int level = 0;  // 1-based level the inequality is attached to
  std::string inequality;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  bool ok = false;
  std::string note;
};

struct ScaleSchedule {
  ScheduleMode mode = ScheduleMode::pairs;
  std::vector<ScaleLevel> levels;  // descending
  std::vector<Certificate> certificates;
  int N() const { return static_cast<int>(levels.size()); }
  bool all_ok() const;
};

struct NbhdValues {
  double first = 0.0;   // m(N_r(E_omega))
  double second = 0.0;  // m(N_r(E_omega'))
};
using NbhdOracle = std::function<NbhdValues(double r)>;

// Greedy power-of-two descent from r_1 = 1/2: r_{n+1} is the largest power
// of two <= r_n / 2 with both neighbourhood measures <= r_n. Stops below
// r_min or at N_target levels (0: no target). Fewer than two levels throws.
ScaleSchedule build_schedule_twoproj(const NbhdOracle& nbhd, double r_min, int N_target = 0);

using ContentOracle = std::function<double(double r_minus, double r_plus)>;
using RectOracle = std::function<double(double eps, double r, double M)>;

struct BoundReport {
  double L = 0.0;
  int N = 0;
  double alpha = 0.0;
  double C = 1.0;
  double predicted = 0.0;  // C N^-alpha L
};

struct MainSchedule {
  ScaleSchedule schedule;
  BoundReport report;
  std::vector<int> exponents;  // r_n = 2^-exponents[n]
};

struct MainOptions {
  double L = 0.0;
  int N_target = 2;
  double alpha = 0.25;
  double C = 1.0;
  int m_max = 40;
};

// Greedy scan over dyadic scales 2^-m (r_- = r_+): content at every level
// <= L, separation r_{n+1} <= r_n / 2 and the rect lower bound at
// (r_{n+1}, r_n, 1/r_n) <= N_target^-alpha.
MainSchedule build_schedule_main(const ContentOracle& content, const RectOracle& rect, const MainOptions& opt);

// Independent re-check of chain, separation and power-of-two invariants,
// plus the small-projection inequalities when an oracle is supplied.
// Returns the list of failures.
std::vector<std::string> verify_schedule(const ScaleSchedule& s, const NbhdOracle* nbhd = nullptr);

// Largest p with m_{j+1} >= 2^(C m_j^p) for every consecutive pair with
// m_j > 1 (infinity when no pair constrains p).
double admissible_gap_exponent(std::span<const int> exponents, double C = 1.0);

}  // namespace gmt
