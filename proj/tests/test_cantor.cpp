#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "gmt/cantor.hpp"
#include "gmt/error.hpp"
#include "oracles.hpp"

using namespace gmt;

TEST_CASE("cantor_intervals examples") {
  auto k0 = cantor_intervals(0);
  REQUIRE(k0.size() == 1);
  CHECK(k0.intervals()[0].lo == 0);
  CHECK(k0.intervals()[0].hi == 1);

  auto k1 = cantor_intervals(1);
  REQUIRE(k1.size() == 2);
  CHECK(k1.intervals()[0].hi == 0.25);
  CHECK(k1.intervals()[1].lo == 0.75);
  CHECK(k1.intervals()[1].hi == 1);

  auto k2 = cantor_intervals(2);
  REQUIRE(k2.size() == 4);
  const double starts[] = {0, 3.0 / 16, 3.0 / 4, 15.0 / 16};
  for (int i = 0; i < 4; ++i) {
    CHECK(k2.intervals()[i].lo == starts[i]);
    CHECK(k2.intervals()[i].length() == 1.0 / 16);
  }
}

TEST_CASE("cantor_intervals: digit enumeration, count and exact measure") {
  for (int n = 0; n <= 12; ++n) {
    auto K = cantor_intervals(n);
    auto t = oracle::cantor_digits(n);
    REQUIRE(K.size() == t.size());
    double s = std::ldexp(1.0, -2 * n);
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(K.intervals()[i].lo == double(t[i]) * s);
    CHECK(K.measure() == std::ldexp(1.0, -n));
  }
  CHECK_THROWS_AS(cantor_intervals(13), BudgetError);
  CHECK_THROWS_AS(cantor_intervals(-1), ConfigError);
  try {
    cantor_intervals(20);
  } catch (const BudgetError& e) {
    CHECK(std::string(e.what()).find("n = 20") != std::string::npos);
  }
}

TEST_CASE("cantor_squares examples and counts") {
  CHECK(cantor_squares(0) == SquareSet::unit_square());
  auto k1 = cantor_squares(1);
  CHECK(k1.size() == 4);
  for (Cell c : {Cell{0, 0}, Cell{3, 0}, Cell{0, 3}, Cell{3, 3}}) CHECK(k1.contains(c));
  CHECK(cantor_squares(2).area() == 1.0 / 16);
  for (int n = 0; n <= 6; ++n) {
    auto K = cantor_squares(n);
    CHECK(K.size() == (std::size_t{1} << (2 * n)));
    CHECK(K.area() == std::ldexp(1.0, -2 * n));
  }
  CHECK_THROWS_AS(cantor_squares(11), BudgetError);
}

TEST_CASE("cantor_squares is the product of cantor_intervals") {
  for (int n = 0; n <= 4; ++n) {
    auto K = cantor_squares(n);
    auto I = cantor_intervals(n);
    std::size_t count = 0;
    for (auto a : I.intervals())
      for (auto b : I.intervals()) {
        Cell c{std::llround(a.lo / K.side()), std::llround(b.lo / K.side())};
        CHECK(K.contains(c));
        ++count;
      }
    CHECK(count == K.size());
  }
}

TEST_CASE("nesting K_{n+1} inside K_n") {
  for (int n = 0; n < 7; ++n) CHECK(cantor_squares(n + 1).subset_of(cantor_squares(n)));
  CHECK_FALSE(cantor_squares(1).subset_of(cantor_squares(2)));
}

// brute force: level-depth cells inside K_n touching the edge of their block
static std::set<std::pair<std::int64_t, std::int64_t>> boundary_oracle(int n, int depth) {
  std::set<std::pair<std::int64_t, std::int64_t>> out;
  std::int64_t k = std::int64_t{1} << (2 * (depth - n));
  auto t = oracle::cantor_digits(n);
  for (auto by : t)
    for (auto bx : t)
      for (std::int64_t y = by * k; y < (by + 1) * k; ++y)
        for (std::int64_t x = bx * k; x < (bx + 1) * k; ++x)
          if (x == bx * k || x == (bx + 1) * k - 1 || y == by * k || y == (by + 1) * k - 1) out.insert({x, y});
  return out;
}

TEST_CASE("boundary_squares examples") {
  CHECK(boundary_squares(0, 1).size() == 12);
  CHECK(boundary_squares(1, 1).size() == 4);
  CHECK(boundary_squares(0, 2).size() == 60);
  CHECK_THROWS_AS(boundary_squares(2, 1), ConfigError);
  for (auto [n, d] : {std::pair{0, 1}, {0, 2}, {1, 2}, {2, 3}, {2, 4}, {3, 3}}) {
    auto B = boundary_squares(n, d);
    auto ref = boundary_oracle(n, d);
    REQUIRE(B.size() == ref.size());
    for (auto c : B.cells()) CHECK(ref.count({c.ix, c.iy}) == 1);
    CHECK(B.subset_of(cantor_squares(n)));
  }
}

TEST_CASE("DiscreteMeasure totals") {
  for (int n = 0; n <= 6; ++n) CHECK(DiscreteMeasure::natural_cantor(n).total() == 1.0);
  auto mu = DiscreteMeasure::area(cantor_squares(3));
  CHECK(mu.total() == cantor_squares(3).area());
  // each level-2 cell splits into 256 level-4 cells
  auto fine = cantor_squares(2).refined(4);
  CHECK(DiscreteMeasure(fine, std::ldexp(1.0, -4 - 8)).total() == DiscreteMeasure::natural_cantor(2).total());
  CHECK_THROWS_AS(DiscreteMeasure(fine, 0.0), ConfigError);
}

// the lattice squares reached by sample points of E; the cover must use at
// least these balls
static std::size_t needed_balls(const SquareSet& E, const ContentCover& c) {
  std::set<std::pair<std::int64_t, std::int64_t>> need;
  const int k = 8;
  for (auto cell : E.cells()) {
    Rect r = E.cell_rect(cell);
    for (int a = 0; a <= k; ++a)
      for (int b = 0; b <= k; ++b) {
        double x = r.x0 + (r.x1 - r.x0) * a / k, y = r.y0 + (r.y1 - r.y0) * b / k;
        auto i = std::int64_t(std::floor((x - c.offset.x) / c.spacing));
        auto j = std::int64_t(std::floor((y - c.offset.y) / c.spacing));
        double cx = c.offset.x + (double(i) + 0.5) * c.spacing, cy = c.offset.y + (double(j) + 0.5) * c.spacing;
        CHECK(std::hypot(x - cx, y - cy) < c.radius);
        need.insert({i, j});
      }
  }
  return need.size();
}

TEST_CASE("spherical_content_upper examples") {
  CHECK(spherical_content_upper(SquareSet(4, 2, {}), 0.1, 0.2) == 0.0);
  CHECK_THROWS_AS(spherical_content_upper(cantor_squares(1), 0.2, 0.1), ConfigError);
  CHECK_THROWS_AS(spherical_content_upper(cantor_squares(1), 0.0, 0.1), ConfigError);

  for (int lvl = 0; lvl <= 3; ++lvl) {
    SquareSet one(4, lvl, {{0, 0}});
    double s = one.side();
    auto c = spherical_content_cover(one, s, s);
    CHECK(c.value <= 4 * s);
    CHECK(c.balls >= needed_balls(one, c));
  }
}

TEST_CASE("spherical content on Cantor boundaries stays bounded") {
  for (int n = 1; n <= 8; ++n) {
    auto E = boundary_squares(n, n);
    for (int j = 0; j <= n; ++j) {
      double r = std::ldexp(1.0, -2 * j);
      double v = spherical_content_upper(E, r, r);
      CHECK(v <= 32.0);
      if (n <= 4) CHECK(spherical_content_cover(E, r, r).balls >= needed_balls(E, spherical_content_cover(E, r, r)));
    }
  }
}

TEST_CASE("spherical content: monotone in r_hi and under inclusion, and a covering lower bound") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    auto A = oracle::random_square_set(rng, 4, 3, 0.1);
    if (A.empty()) continue;
    std::vector<Cell> more(A.cells().begin(), A.cells().end());
    more.push_back({7, 9});
    SquareSet B(4, 3, more);
    double lo = 1.0 / 64;
    double prev = INFINITY;
    for (double hi : {1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8, 1.0 / 4}) {
      double v = spherical_content_upper(A, lo, hi);
      CHECK(v <= prev);
      prev = v;
      CHECK(v <= spherical_content_upper(B, lo, hi));
      // sum of diameters of disc covers of a set of area a with radii <= hi
      CHECK(v >= 2 * A.area() / (std::numbers::pi * hi));
    }
  }
}
