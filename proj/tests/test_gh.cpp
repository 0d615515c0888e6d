#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "confgeo/gh.hpp"
#include "test_util.hpp"

using namespace confgeo;
using namespace confgeo::testutil;

namespace {

FiniteMetricSpace from_points(const std::vector<Point>& pts) {
  int n = static_cast<int>(pts.size());
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d[i][j] = dist(pts[i], pts[j]);
  return FiniteMetricSpace(pts, d);
}

FiniteMetricSpace random_space(std::mt19937& rng, int n, double spread = 1.0) {
  std::uniform_real_distribution<double> U(-spread, spread);
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) pts.push_back({U(rng), U(rng)});
  return from_points(pts);
}

FiniteMetricSpace scale_space(const FiniteMetricSpace& X, double s) {
  int n = X.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d[i][j] = s * X.d(i, j);
  return FiniteMetricSpace(X.labels(), d);
}

// Exhaustive minimum over every correspondence (nonempty relation with both
// projections surjective), enumerated as bitmasks. Only feasible for tiny
// spaces; used as an independent check of the search in gh_exact.
double gh_bitmask_oracle(const FiniteMetricSpace& X,
                         const FiniteMetricSpace& Y) {
  int nx = X.size(), ny = Y.size();
  int bits = nx * ny;
  REQUIRE(bits <= 16);
  double best = kInf;
  for (unsigned rel = 1; rel < (1u << bits); ++rel) {
    unsigned xs = 0, ys = 0;
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j)
        if (rel & (1u << (i * ny + j))) {
          xs |= 1u << i;
          ys |= 1u << j;
        }
    if (xs != (1u << nx) - 1 || ys != (1u << ny) - 1) continue;
    double dis = 0.0;
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j) {
        if (!(rel & (1u << (i * ny + j)))) continue;
        for (int k = 0; k < nx; ++k)
          for (int l = 0; l < ny; ++l) {
            if (!(rel & (1u << (k * ny + l)))) continue;
            dis = std::max(dis, std::abs(X.d(i, k) - Y.d(j, l)));
          }
      }
    best = std::min(best, dis);
  }
  return 0.5 * best;
}

}  // namespace

TEST_CASE("metric space validation") {
  std::vector<Point> pts{{0, 0}, {1, 0}};
  CHECK_THROWS(FiniteMetricSpace(pts, {{0, 1}, {2, 0}}));       // asymmetric
  CHECK_THROWS(FiniteMetricSpace(pts, {{0.5, 1}, {1, 0}}));     // diagonal
  CHECK_THROWS(FiniteMetricSpace(pts, {{0, -1}, {-1, 0}}));     // negative
  std::vector<Point> tri{{0, 0}, {1, 0}, {2, 0}};
  CHECK_THROWS(FiniteMetricSpace(
      tri, {{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}));  // triangle violation
  CHECK_NOTHROW(from_points(tri));
}

TEST_CASE("space csv round trip") {
  std::mt19937 rng(3);
  FiniteMetricSpace X = random_space(rng, 5);
  std::stringstream ss(X.csv());
  FiniteMetricSpace Y = FiniteMetricSpace::from_csv(ss);
  REQUIRE(Y.size() == X.size());
  for (int i = 0; i < X.size(); ++i)
    for (int j = 0; j < X.size(); ++j) CHECK(Y.d(i, j) == X.d(i, j));
}

TEST_CASE("sample_space: flat pair, invariants, shift covariance") {
  auto grid = Grid::square(1.0, 128);
  ConformalMetric flat(ScalarField(grid, 0.0));
  Region half = Region::disk({0, 0}, 0.5);
  FiniteMetricSpace two = sample_space(flat, half, 2);
  CHECK(two.d(0, 1) ==
        doctest::Approx(dist(two.labels()[0], two.labels()[1])).epsilon(0.02));

  FiniteMetricSpace s0 = sample_space(flat, half, 12);  // validated on build

  double c = 0.9;
  ConformalMetric shifted(ScalarField(grid, c));
  FiniteMetricSpace s1 = sample_space(shifted, half, 12);
  for (int i = 0; i < 12; ++i) {
    CHECK(s1.labels()[i].x == s0.labels()[i].x);
    CHECK(s1.labels()[i].y == s0.labels()[i].y);
    for (int j = 0; j < 12; ++j)
      CHECK(s1.d(i, j) ==
            doctest::Approx(std::exp(c) * s0.d(i, j)).epsilon(1e-9));
  }

  CHECK_THROWS(sample_space(flat, half, 1 << 20));
}

TEST_CASE("gh_exact: identity, collapse to a point, two-point spaces") {
  std::mt19937 rng(5);
  FiniteMetricSpace X = random_space(rng, 6);
  CHECK(gh_exact(X, X) <= 1e-12);

  FiniteMetricSpace tri = from_points({{0, 0}, {1, 0}, {0.4, 0.9}});
  FiniteMetricSpace pt = from_points({{5, 5}});
  CHECK(gh_exact(tri, pt) == doctest::Approx(0.5 * tri.diameter()).epsilon(1e-12));

  FiniteMetricSpace a = from_points({{0, 0}, {1, 0}});
  FiniteMetricSpace b = from_points({{0, 0}, {2, 0}});
  CHECK(gh_exact(a, b) == doctest::Approx(0.5).epsilon(1e-12));

  FiniteMetricSpace big = random_space(rng, 8);
  CHECK_THROWS(gh_exact(big, big));
}

TEST_CASE("gh_exact agrees with the bitmask oracle on tiny spaces") {
  std::mt19937 rng(9);
  for (int t = 0; t < 12; ++t) {
    FiniteMetricSpace X = random_space(rng, 2 + t % 2, 1.0);
    FiniteMetricSpace Y = random_space(rng, 3, 1.5);
    CHECK(gh_exact(X, Y) ==
          doctest::Approx(gh_bitmask_oracle(X, Y)).epsilon(1e-12));
  }
}

TEST_CASE("gh_exact symmetry and triangle inequality") {
  std::mt19937 rng(11);
  for (int t = 0; t < 8; ++t) {
    FiniteMetricSpace X = random_space(rng, 4);
    FiniteMetricSpace Y = random_space(rng, 5);
    FiniteMetricSpace Z = random_space(rng, 3);
    double xy = gh_exact(X, Y), yx = gh_exact(Y, X);
    CHECK(xy == doctest::Approx(yx).epsilon(1e-12));
    CHECK(gh_exact(X, Z) <= xy + gh_exact(Y, Z) + 1e-12);
  }
}

TEST_CASE("gh_exact under uniform scaling") {
  std::mt19937 rng(13);
  FiniteMetricSpace X = random_space(rng, 5);
  for (double s : {0.5, 0.9, 1.3}) {
    CHECK(gh_exact(X, scale_space(X, s)) <=
          0.5 * std::abs(s - 1) * X.diameter() + 1e-12);
  }
}

TEST_CASE("gh_exact handles single-point spaces") {
  FiniteMetricSpace pt = from_points({{1, 2}});
  FiniteMetricSpace pt2 = from_points({{-3, 0}});
  CHECK(gh_exact(pt, pt2) == 0.0);
  std::mt19937 rng(77);
  FiniteMetricSpace X = random_space(rng, 7);
  CHECK(gh_exact(pt, X) == doctest::Approx(0.5 * X.diameter()).epsilon(1e-12));
}

TEST_CASE("gh_bounds bracket the exact distance") {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> size(2, 7);
  for (int t = 0; t < 50; ++t) {
    FiniteMetricSpace X = random_space(rng, size(rng));
    FiniteMetricSpace Y = random_space(rng, size(rng), 1.4);
    double exact = gh_exact(X, Y);
    GhBounds b = gh_bounds(X, Y);
    CHECK(b.lower <= exact + 1e-12);
    CHECK(b.upper >= exact - 1e-12);
    CHECK(b.lower <= b.upper);
  }

  FiniteMetricSpace X = random_space(rng, 6);
  GhBounds self = gh_bounds(X, X);
  CHECK(self.lower == 0.0);
  CHECK(self.upper <= 1e-12);

  GhBounds scaled = gh_bounds(X, scale_space(X, 2.0));
  CHECK(scaled.lower >= 0.25 * X.diameter() - 1e-9);
}
