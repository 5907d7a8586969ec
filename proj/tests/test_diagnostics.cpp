#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gmt/diagnostics.hpp"
#include "gmt/error.hpp"
#include "oracles.hpp"

using namespace gmt;

namespace {

// sector membership through the angle to omega rather than a dot product
bool in_sector_angle(Point y, Point x, double theta, double r, double M) {
  double dx = y.x - x.x, dy = y.y - x.y;
  double d = std::hypot(dx, dy);
  if (!(d < r)) return false;
  if (d == 0.0) return true;
  double phi = std::atan2(dy, dx) - theta;
  return std::abs(std::cos(phi)) <= 1.0 / M;
}

double sector_oracle(const DiscreteMeasure& mu, Point x, double theta, double r_in, double r_out, double M) {
  const auto& S = mu.support();
  double m = 0;
  for (const auto& c : S.cells()) {
    Point y = S.cell_center(c);
    if (in_sector_angle(y, x, theta, r_out, M) && !in_sector_angle(y, x, theta, r_in, M)) m += mu.mass_per_cell();
  }
  return m;
}

// Greedy on integer runs of a row (or rows) of cells; sep = k cell sides.
std::int64_t row_multiplicity(const SquareSet& E, std::int64_t row_lo, std::int64_t row_hi, std::int64_t k) {
  std::int64_t K = 1;
  for (int i = 0; i < E.level(); ++i) K *= E.base();
  std::vector<bool> occ(static_cast<std::size_t>(K), false);
  for (const auto& c : E.cells())
    if (c.iy >= row_lo && c.iy <= row_hi) occ[static_cast<std::size_t>(c.ix)] = true;
  std::int64_t count = 0, last = -(std::int64_t{1} << 40);
  for (std::int64_t a = 0; a < K;) {
    if (!occ[static_cast<std::size_t>(a)]) {
      ++a;
      continue;
    }
    std::int64_t e = a;
    while (e < K && occ[static_cast<std::size_t>(e)]) ++e;
    std::int64_t cand = std::max(a, last + k);
    if (cand <= e) {
      std::int64_t n = (e - cand) / k + 1;
      count += n;
      last = cand + (n - 1) * k;
    }
    a = e;
  }
  return count;
}

}  // namespace

TEST_CASE("sector mass on an empty support is zero") {
  DiscreteMeasure mu(SquareSet(2, 3, {}), 1.0);
  CHECK(sector_mass(mu, {{0.5, 0.5}, Direction(0), 0.0, 1.0, 2.0}) == 0.0);
}

TEST_CASE("sector with M = 1 is the annulus") {
  std::mt19937_64 rng(3);
  auto mu = DiscreteMeasure::area(oracle::random_square_set(rng, 2, 5, 0.5));
  Point x{0.41, 0.53};
  double expect = 0;
  for (const auto& c : mu.support().cells()) {
    Point y = mu.support().cell_center(c);
    double d = std::hypot(y.x - x.x, y.y - x.y);
    if (d >= 0.1 && d < 0.35) expect += mu.mass_per_cell();
  }
  CHECK(sector_mass(mu, {x, Direction(1.0), 0.1, 0.35, 1.0}, false) == doctest::Approx(expect));
  CHECK_THROWS_AS(sector_mass(mu, {x, Direction(1.0), 0.1, 0.35, 1.0}), ConfigError);
  CHECK_THROWS_AS(sector_mass(mu, {x, Direction(1.0), 0.1, 0.35, 0.0}, false), ConfigError);
  CHECK_THROWS_AS(sector_mass(mu, {x, Direction(1.0), 0.35, 0.35, 2.0}), ConfigError);
  CHECK_THROWS_AS(sector_mass(mu, {x, Direction(1.0), -0.1, 0.35, 2.0}), ConfigError);
}

TEST_CASE("sector mass matches the angle oracle on random sets") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(0, 1);
  for (int t = 0; t < 40; ++t) {
    auto mu = DiscreteMeasure::area(oracle::random_square_set(rng, 2, 5, U(rng)));
    Point x{U(rng), U(rng)};
    double theta = U(rng) * 2 * std::numbers::pi;
    double r_in = 0.3 * U(rng), r_out = r_in + 0.05 + 0.6 * U(rng);
    double M = 1.0 + 5 * U(rng) + 1e-3;
    CHECK(sector_mass(mu, {x, Direction(theta), r_in, r_out, M}) ==
          doctest::Approx(sector_oracle(mu, x, theta, r_in, r_out, M)));
  }
}

TEST_CASE("sector area on the full grid approaches the double cone area") {
  auto mu = DiscreteMeasure::area(SquareSet(2, 0, {{0, 0}}).refined(9));
  // |cos phi| <= 1/2 covers 4 asin(1/2) radians: area 2 asin(1/2) r^2 = pi/12 at r = 1/2
  double m = sector_mass(mu, {{0.5, 0.5}, Direction(0.3), 0.0, 0.5, 2.0});
  CHECK(std::abs(m - std::numbers::pi / 12) < 2e-3);
}

TEST_CASE("sector additivity and monotonicity") {
  std::mt19937_64 rng(5);
  auto mu = DiscreteMeasure::area(oracle::random_square_set(rng, 2, 6, 0.4));
  Point x{0.37, 0.61};
  Direction w(0.7);
  double a = sector_mass(mu, {x, w, 0.05, 0.2, 3});
  double b = sector_mass(mu, {x, w, 0.2, 0.45, 3});
  double ab = sector_mass(mu, {x, w, 0.05, 0.45, 3});
  CHECK(a + b == doctest::Approx(ab));
  double prev = 0;
  for (double r = 0.06; r < 0.9; r += 0.04) {
    double m = sector_mass(mu, {x, w, 0.05, r, 3});
    CHECK(m >= prev);
    prev = m;
  }
  prev = INFINITY;
  for (double M = 1.1; M < 20; M *= 1.3) {
    double m = sector_mass(mu, {x, w, 0.05, 0.45, M});
    CHECK(m <= prev);
    prev = m;
  }
}

static ScaleSchedule three_levels() {
  ScaleSchedule s;
  s.levels = {{0.5, 0.5}, {0.125, 0.125}, {1.0 / 32, 1.0 / 32}};
  return s;
}

static DiscreteMeasure row_measure(bool vertical) {
  // row of level-8 cells through (0.5, 0.5) with length normalisation
  std::vector<Cell> cells;
  for (std::int64_t i = 0; i < 256; ++i) cells.push_back(vertical ? Cell{128, i} : Cell{i, 128});
  return DiscreteMeasure(SquareSet(2, 8, cells), 1.0 / 256);
}

TEST_CASE("is_normal on lines") {
  auto s = three_levels();
  Point x{128.5 / 256, 128.5 / 256};
  Direction up(std::numbers::pi / 2);
  // aperture M / 10 = 2
  auto perp = is_normal(row_measure(false), x, up, s, 2, 20.0, 0.25);
  CHECK(perp.normal);
  CHECK(perp.witness_mass > perp.threshold);
  CHECK(perp.witness_r > 1.0 / 32);
  CHECK(perp.witness_r <= 0.5);
  auto par = is_normal(row_measure(true), x, up, s, 2, 20.0, 0.25);
  CHECK_FALSE(par.normal);
  CHECK(par.radii_tested > 0);

  DiscreteMeasure empty(SquareSet(2, 8, {}), 1.0);
  CHECK_FALSE(is_normal(empty, x, up, s, 2, 20.0, 0.25).normal);

  CHECK_THROWS_AS(is_normal(row_measure(false), x, up, s, 1, 20.0, 0.25), ConfigError);
  CHECK_THROWS_AS(is_normal(row_measure(false), x, up, s, 3, 20.0, 0.25), ConfigError);
}

TEST_CASE("is_normal is monotone in alpha") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> U(0, 1);
  auto s = three_levels();
  for (int t = 0; t < 30; ++t) {
    DiscreteMeasure mu(oracle::random_square_set(rng, 2, 6, 0.05 * U(rng)), 1.0 / 64);
    Point x{U(rng), U(rng)};
    Direction w(U(rng) * 3);
    bool prev = false;
    for (double a = 0.05; a <= 3; a += 0.25) {
      bool n = is_normal(mu, x, w, s, 2, 2.0, a).normal;
      CHECK((!prev || n));
      prev = n;
    }
  }
}

TEST_CASE("line multiplicity examples") {
  SquareSet E(2, 3, {{0, 0}, {1, 1}});
  CHECK(line_multiplicity(E, {0.9, Direction(std::numbers::pi / 2)}, 0.01) == 0);
  // diagonal through both squares: the section is [0, sqrt 2]
  Line diag{0.0, Direction(3 * std::numbers::pi / 4)};
  double s2 = std::sqrt(2.0) * 0.25;
  CHECK(line_multiplicity(E, diag, s2 * (1 - 1e-12)) == 2);
  CHECK(line_multiplicity(E, diag, s2 * 1.01) == 1);
  CHECK_THROWS_AS(line_multiplicity(E, diag, 0.0), ConfigError);

  for (int n = 1; n <= 4; ++n) {
    auto K = cantor_squares(n);
    double side = std::ldexp(1.0, -2 * n);
    std::int64_t m = line_multiplicity(K, {0.5 * side, Direction(std::numbers::pi / 2)}, side);
    CHECK(m == (std::int64_t{2} << n));
    CHECK(m == row_multiplicity(K, 0, 0, 1));
  }
}

TEST_CASE("line multiplicity matches the integer row oracle") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0, 1);
  for (int t = 0; t < 300; ++t) {
    auto E = oracle::random_square_set(rng, 2, 6, 0.2 + 0.6 * U(rng));
    double side = E.side();
    std::int64_t row = static_cast<std::int64_t>(rng() % 64);
    std::int64_t k = 1 + static_cast<std::int64_t>(rng() % 6);
    Direction horiz(std::numbers::pi / 2);
    CHECK(line_multiplicity(E, {(static_cast<double>(row) + 0.5) * side, horiz}, static_cast<double>(k) * side) ==
          row_multiplicity(E, row, row, k));
    // a line on the edge between two rows meets both closed rows
    if (row > 0)
      CHECK(line_multiplicity(E, {static_cast<double>(row) * side, horiz}, static_cast<double>(k) * side) ==
            row_multiplicity(E, row - 1, row, k));
  }
}

TEST_CASE("line multiplicity is nonincreasing in sep") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(0, 1);
  for (int t = 0; t < 50; ++t) {
    auto E = oracle::random_square_set(rng, 2, 5, 0.4);
    Line l{U(rng), Direction(U(rng) * std::numbers::pi)};
    std::int64_t prev = INT64_MAX;
    for (double sep = 0.002; sep < 1.5; sep *= 1.2) {
      auto m = line_multiplicity(E, l, sep);
      CHECK(m <= prev);
      prev = m;
    }
  }
}

TEST_CASE("strip mass examples") {
  auto mu = DiscreteMeasure::natural_cantor(1);
  Direction e1(0), e2(std::numbers::pi / 2);
  CHECK(strip_mass(mu, e1, {0, 0.25}) == 0.5);
  CHECK(strip_mass(mu, e1, {0.25, 0.75}) == 0.0);
  CHECK(strip_mass(mu, e2, {0, 1}) == 1.0);
  CHECK(max_strip_density(mu, e1, 0.25) == 2.0);
  CHECK(max_strip_density(mu, e1, 1.0) == 1.0);
  CHECK_THROWS_AS(max_strip_density(mu, e1, 0), ConfigError);
  CHECK_THROWS_AS(pushforward_maximal(mu, e1, 0.1, 0), ConfigError);
}

TEST_CASE("strip partitions sum to the total and match column counts") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(0, 1);
  for (int t = 0; t < 20; ++t) {
    auto S = oracle::random_square_set(rng, 2, 5, U(rng));
    DiscreteMeasure mu(S, 1.0 / 32);
    Direction w(U(rng) * 2 * std::numbers::pi);
    double total = 0, width = 0.01 + 0.2 * U(rng);
    for (double a = -1.5; a < 1.5; a += width) total += strip_mass(mu, w, {a, a + width});
    CHECK(total == doctest::Approx(static_cast<double>(S.size()) / 32));

    std::vector<int> col(32, 0);
    for (const auto& c : S.cells()) ++col[static_cast<std::size_t>(c.ix)];
    for (int k = 0; k < 32; ++k)
      CHECK(strip_mass(mu, Direction(0), {k / 32.0, (k + 1) / 32.0}) == col[static_cast<std::size_t>(k)] / 32.0);

    // best window by brute force over starts at centres and a fine grid
    double best = 0;
    std::vector<double> starts;
    for (const auto& c : S.cells()) {
      Point y = S.cell_center(c);
      starts.push_back(y.x * w.unit().x + y.y * w.unit().y);
    }
    for (double a = -1.5; a < 1.5; a += 1e-3) starts.push_back(a);
    for (double a : starts) best = std::max(best, strip_mass(mu, w, {a, a + width}) / width);
    CHECK(max_strip_density(mu, w, width) == doctest::Approx(best));
  }
}

TEST_CASE("pushforward maximal function against a direct scan") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0, 1);
  for (int t = 0; t < 20; ++t) {
    auto S = oracle::random_square_set(rng, 2, 4, 0.3);
    DiscreteMeasure mu(S, 1.0 / 16);
    Direction w(U(rng) * std::numbers::pi);
    double t0 = U(rng), mw = 0.01 + 0.1 * U(rng);
    auto ratio = [&](double rho) {
      double m = 0;
      for (const auto& c : S.cells()) {
        Point y = S.cell_center(c);
        if (std::abs(y.x * w.unit().x + y.y * w.unit().y - t0) <= rho) m += 1.0 / 16;
      }
      return m / (2 * rho);
    };
    double v = pushforward_maximal(mu, w, t0, mw);
    double attained = 0;
    for (double rho = mw / 2; rho < 2; rho += 1e-3) {
      CHECK(ratio(rho) <= v * (1 + 1e-12));
      attained = std::max(attained, ratio(rho));
    }
    for (const auto& c : S.cells()) {
      Point y = S.cell_center(c);
      double d = std::abs(y.x * w.unit().x + y.y * w.unit().y - t0);
      if (d >= mw / 2) attained = std::max(attained, ratio(d));
    }
    CHECK(v == doctest::Approx(attained));
  }
}
