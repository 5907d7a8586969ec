#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gmt/calibration.hpp"
#include "gmt/cantor.hpp"
#include "gmt/error.hpp"
#include "gmt/multiscale.hpp"
#include "gmt/projection.hpp"
#include "gmt/rectifiability.hpp"

using namespace gmt;

static PigeonholeResult brute_pigeonhole(const std::vector<double>& m, double eps) {
  int N = int(m.size()) - 1;
  int k = int(std::ceil(eps * N));
  PigeonholeResult best{-1, -1, INFINITY};
  for (int n = 0; n + k <= N; ++n)
    if (m[n + k] - m[n] < best.gap_mass) best = {n, n + k, m[n + k] - m[n]};
  return best;
}

TEST_CASE("pigeonhole examples") {
  std::vector<double> flat(9, 0.7);
  CHECK(pigeonhole(flat, 0.25).gap_mass == 0.0);

  for (int N : {4, 7, 10, 64, 101}) {
    std::vector<double> lin;
    for (int i = 0; i <= N; ++i) lin.push_back(double(i) / N);
    auto r = pigeonhole(lin, 0.25);
    CHECK(r.gap_mass == doctest::Approx(std::ceil(N / 4.0) / N));
    CHECK(r.gap_mass <= 2 * 0.25 + 1e-12);
  }
  auto r = pigeonhole(std::vector<double>{0, 1, 3}, 0.5);
  CHECK(r.m - r.n == 1);
  CHECK(r.n == 0);
  CHECK(r.gap_mass == 1);
}

TEST_CASE("pigeonhole rejects bad input") {
  CHECK_THROWS_AS(pigeonhole(std::vector<double>{0, 1}, 0.5), ConfigError);
  CHECK_THROWS_AS(pigeonhole(std::vector<double>{0, 2, 1, 3}, 0.5), ConfigError);
  CHECK_THROWS_AS(pigeonhole(std::vector<double>{0, 1, 2, 3}, 0.6), ConfigError);
  CHECK_THROWS_AS(pigeonhole(std::vector<double>{0, 1, 2, 3}, 0.2), ConfigError);
  CHECK_THROWS_AS(pigeonhole(std::vector<double>{-1, 1, 2}, 0.5), ConfigError);
}

TEST_CASE("pigeonhole matches brute force and the 4 eps bound") {
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<int> Nd(2, 512);
  std::uniform_real_distribution<double> U(0, 1);
  for (int t = 0; t < 2000; ++t) {
    int N = Nd(rng);
    std::vector<double> m{U(rng)};
    for (int i = 1; i <= N; ++i) m.push_back(m.back() + (rng() % 4 == 0 ? 0.0 : U(rng)));
    double eps = 1.0 / N + U(rng) * (0.5 - 1.0 / N);
    auto r = pigeonhole(m, eps);
    auto b = brute_pigeonhole(m, eps);
    CHECK(r.gap_mass == b.gap_mass);
    CHECK(r.n == b.n);
    CHECK(r.m - r.n >= eps * N);
    CHECK(r.gap_mass <= 4 * eps * m.back());
  }
}

TEST_CASE("log_star values") {
  CHECK(log_star(1.0) == 0);
  CHECK(log_star(0.3) == 0);
  CHECK(log_star(std::numbers::e) == 1);
  CHECK(log_star(std::exp(std::numbers::e)) == 2);
  CHECK(log_star(2.0) == 1);
  CHECK(log_star(16.0) == 3);
  CHECK(log_star(1e300) == 4);  // 690.8, 6.54, 1.88, 0.63
  CHECK_THROWS_AS(log_star(0.0), ConfigError);
  CHECK_THROWS_AS(log_star(INFINITY), ConfigError);
  for (double y : {1.5, 2.0, 3.0, 10.0, 100.0, 700.0})
    CHECK(log_star(std::exp(y)) == log_star(y) + 1);
}

TEST_CASE("favar_bound") {
  CHECK(favar_bound(2, 0.7, 1.3) == 1.3);  // log_* 2 = 1
  double prev = INFINITY;
  for (int n = 2; n < 5000; n += 7) {
    double b = favar_bound(n, 0.25);
    CHECK(b <= prev);
    prev = b;
  }
  CHECK_THROWS_AS(favar_bound(1, 0.25), ConfigError);
}

TEST_CASE("favar_bound dominates the tabulated Favard lengths") {
  auto C = run_calibration("C_favar", {});
  auto t = favard_table(6, FavardOptions{});
  CHECK(C.value == t.rows[1].estimate.value);
  for (int n = 2; n <= 6; ++n) CHECK(favar_bound(n, 0.25, C.value) >= t.rows[n].estimate.value);
}

static NbhdOracle cantor_nbhd(int n) {
  auto a = project(cantor_squares(n), Direction(0));
  auto b = project(cantor_squares(n), Direction(std::numbers::pi / 2));
  return [a, b](double r) -> NbhdValues { return {neighborhood(a, r).measure(), neighborhood(b, r).measure()}; };
}

TEST_CASE("twoproj schedule on the idealised 3 r^(1/2) law") {
  NbhdOracle law = [](double r) -> NbhdValues { return {3 * std::sqrt(r), 3 * std::sqrt(r)}; };
  auto s = build_schedule_twoproj(law, std::ldexp(1.0, -200));
  std::vector<int> ex;
  for (auto l : s.levels) ex.push_back(-std::ilogb(l.r_plus));
  REQUIRE(ex.size() >= 4);
  CHECK(ex[0] == 1);
  CHECK(ex[1] == 6);
  CHECK(ex[2] == 16);
  CHECK(ex[3] == 36);
  for (std::size_t i = 2; i < ex.size(); ++i) CHECK(ex[i] >= 2 * ex[i - 1]);
  CHECK(std::abs(s.N() - std::log2(200.0)) <= 2);
  CHECK(verify_schedule(s, &law).empty());
}

TEST_CASE("twoproj schedule on K_8 projections") {
  auto nb = cantor_nbhd(8);
  auto s = build_schedule_twoproj(nb, std::ldexp(1.0, -30));
  REQUIRE(s.N() == 3);
  CHECK(s.levels[0].r_plus == 0.5);
  CHECK(s.levels[1].r_plus == std::ldexp(1.0, -5));
  CHECK(s.levels[2].r_plus == std::ldexp(1.0, -13));
  CHECK(s.all_ok());
  CHECK(verify_schedule(s, &nb).empty());
  for (const auto& c : s.certificates) CHECK(c.slack >= 0);
}

TEST_CASE("twoproj trivial oracles and r_min monotonicity") {
  NbhdOracle zero = [](double) -> NbhdValues { return {0, 0}; };
  auto s = build_schedule_twoproj(zero, std::ldexp(1.0, -10));
  REQUIRE(s.N() == 10);
  for (int i = 0; i < 10; ++i) CHECK(s.levels[i].r_plus == std::ldexp(1.0, -(i + 1)));
  CHECK(build_schedule_twoproj(zero, std::ldexp(1.0, -10), 4).N() == 4);

  NbhdOracle one = [](double) -> NbhdValues { return {1, 1}; };
  CHECK_THROWS_AS(build_schedule_twoproj(one, 1e-9), HypothesisError);
  try {
    build_schedule_twoproj(one, 1e-9);
  } catch (const HypothesisError& e) {
    CHECK(std::string(e.what()).find("m(N_{r_2}(E_omega)) <= r_1") != std::string::npos);
  }
  CHECK_THROWS_AS(build_schedule_twoproj(zero, 0.0), ConfigError);

  auto nb = cantor_nbhd(6);
  int prev = 0;
  for (int k = 4; k <= 40; k += 3) {
    int N = 0;
    try {
      N = build_schedule_twoproj(nb, std::ldexp(1.0, -k)).N();
    } catch (const HypothesisError&) {
      N = 1;
    }
    CHECK(N >= prev);
    prev = N;
  }
}

TEST_CASE("verify_schedule catches broken schedules") {
  ScaleSchedule s;
  s.mode = ScheduleMode::pairs;
  s.levels = {{0.5, 0.5}, {0.25, 0.25}};
  CHECK(verify_schedule(s).empty());
  s.levels[1] = {0.3, 0.3};
  CHECK_FALSE(verify_schedule(s).empty());  // not a power of two, separation broken
  s.levels[1] = {0.25, 0.125};
  CHECK_FALSE(verify_schedule(s).empty());  // r_- > r_+
  s.levels = {{0.5, 0.5}, {0.5, 0.5}};
  CHECK_FALSE(verify_schedule(s).empty());
  ScaleSchedule t;
  t.mode = ScheduleMode::twoproj;
  t.levels = {{0.5, 0.5}, {0.125, 0.125}};
  NbhdOracle one = [](double) -> NbhdValues { return {1, 1}; };
  CHECK_FALSE(verify_schedule(t, &one).empty());
  t.certificates.push_back({2, "x <= y", 2.0, 1.0, -1.0, true, ""});
  CHECK(verify_schedule(t).size() == 1);
}

TEST_CASE("main schedule on the n = 4 Cantor boundary") {
  SquareSet E = boundary_squares(4, 5);
  ContentOracle content = [&](double a, double b) { return spherical_content_upper(E, a, b); };
  RectOracle rect = [&](double eps, double r, double M) {
    return rect_lower_sweep(E, {eps, r, M, {}}, 8, 64).lower;
  };
  MainOptions opt;
  opt.L = 32;
  opt.alpha = 0.25;
  opt.N_target = 2;
  auto s = build_schedule_main(content, rect, opt);
  CHECK(s.schedule.N() >= 2);
  CHECK(s.schedule.all_ok());
  CHECK(verify_schedule(s.schedule).empty());
  CHECK(s.report.predicted == doctest::Approx(opt.C * std::pow(s.schedule.N(), -opt.alpha) * opt.L));
  int lvl2 = 0;
  for (const auto& c : s.schedule.certificates) lvl2 += c.level == 2;
  CHECK(lvl2 == 3);

  MainOptions one;
  one.L = 32;
  one.alpha = 1;
  one.N_target = 1;
  auto t = build_schedule_main(content, rect, one);
  CHECK(t.schedule.N() == 1);

  MainOptions tiny = opt;
  tiny.L = 1e-6;
  ContentOracle flat = [](double, double) { return 1.0; };
  CHECK_THROWS_AS(build_schedule_main(flat, rect, tiny), HypothesisError);
  try {
    build_schedule_main(content, rect, tiny);
    FAIL("expected a hypothesis failure");
  } catch (const HypothesisError& e) {
    CHECK(std::string(e.what()).find("scan stopped") != std::string::npos);
  }
  MainOptions bad = opt;
  bad.alpha = 0;
  CHECK_THROWS_AS(build_schedule_main(content, rect, bad), ConfigError);

  // a rect oracle that never drops below the threshold blocks level 2
  RectOracle stuck = [](double, double, double) { return 1.0; };
  try {
    build_schedule_main(content, stuck, opt);
    FAIL("expected a hypothesis failure");
  } catch (const HypothesisError& e) {
    CHECK(std::string(e.what()).find("unrectifiability") != std::string::npos);
  }
}

TEST_CASE("admissible gap exponent") {
  CHECK(admissible_gap_exponent(std::vector<int>{2, 16}) == doctest::Approx(2.0));
  CHECK(std::isinf(admissible_gap_exponent(std::vector<int>{1, 5})));
  double p = admissible_gap_exponent(std::vector<int>{0, 3, 20, 100000}, 1.0);
  for (auto [a, b] : {std::pair{3, 20}, {20, 100000}}) CHECK(b >= std::exp2(std::pow(a, p)) * (1 - 1e-9));
  CHECK_THROWS_AS(admissible_gap_exponent(std::vector<int>{2, 3}, 0.0), ConfigError);
}
