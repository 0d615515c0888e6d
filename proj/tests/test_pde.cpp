#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "confgeo/norms.hpp"
#include "confgeo/pde.hpp"
#include "test_util.hpp"

using namespace confgeo;
using namespace confgeo::testutil;
namespace {
constexpr double kPi = std::numbers::pi;

double bump(double r) { return r < 0.5 ? 1.0 : 0.0; }
}

TEST_CASE("poisson: zero data gives the zero solution") {
  auto grid = Grid::disk({0, 0}, 1.0, 64);
  ScalarField f(grid, 0.0);
  ScalarField v = solve_poisson_dirichlet(f, Region::disk({0, 0}, 1.0));
  const Grid& g = v.grid();
  for (int id = 0; id < g.size(); ++id)
    if (g.inside_id(id)) CHECK(v.at_id(id) == 0.0);
}

TEST_CASE("poisson: f = 4 on the disk against 1 - |x|^2") {
  auto grid = Grid::disk({0, 0}, 1.0, 256);  // h = 1/128
  ScalarField f(grid, 4.0);
  ScalarField v = solve_poisson_dirichlet(f, Region::disk({0, 0}, 1.0));
  const Grid& g = v.grid();
  double worst = 0;
  for (int id = 0; id < g.size(); ++id) {
    if (!g.inside_id(id)) continue;
    Point p = g.center_id(id);
    if (norm(p) > 1 - 4 * g.h()) continue;  // staircase band excluded
    worst = std::max(worst, std::abs(v.at_id(id) - (1 - dot(p, p))));
  }
  CHECK(worst <= 1e-3);
}

TEST_CASE("poisson: radial bump against the 1-d quadrature oracle") {
  RadialPoisson oracle(bump);
  // sanity of the oracle itself: v(0) = 1/16 + log(2)/8
  CHECK(oracle(0.0) ==
        doctest::Approx(0.0625 + 0.125 * std::log(2.0)).epsilon(1e-6));

  auto grid = Grid::disk({0, 0}, 1.0, 256);
  ScalarField f = ScalarField::sample(
      grid, [](Point p) { return bump(norm(p)); });
  ScalarField v = solve_poisson_dirichlet(f, Region::disk({0, 0}, 1.0));
  const Grid& g = v.grid();
  double worst = 0;
  for (int id = 0; id < g.size(); ++id) {
    if (!g.inside_id(id)) continue;
    Point p = g.center_id(id);
    if (norm(p) > 0.9) continue;
    worst = std::max(worst, std::abs(v.at_id(id) - oracle(norm(p))));
  }
  CHECK(worst <= 1e-3);
}

TEST_CASE("poisson: reports non-convergence") {
  auto grid = Grid::disk({0, 0}, 1.0, 96);
  ScalarField f(grid, 1.0);
  PoissonOptions opts;
  opts.max_iter_factor = 0;
  CHECK_THROWS_WITH(solve_poisson_dirichlet(f, Region::disk({0, 0}, 1.0), opts),
                    doctest::Contains("no convergence"));
}

TEST_CASE("poisson: solve on an annulus region") {
  auto grid = Grid::annulus(0.3, 1.0, 128);
  ScalarField f(grid, 1.0);
  ScalarField v =
      solve_poisson_dirichlet(f, Region::annulus({0, 0}, 0.3, 1.0));
  const Grid& g = v.grid();
  // positive inside, zero trace enforced at both boundaries
  double vmax = 0;
  for (int id = 0; id < g.size(); ++id)
    if (g.inside_id(id)) {
      CHECK(v.at_id(id) >= -1e-12);
      vmax = std::max(vmax, v.at_id(id));
    }
  // radial solution of -lap v = 1 between 0.3 and 1 peaks near 0.0636
  CHECK(vmax == doctest::Approx(0.0636).epsilon(0.05));
}

TEST_CASE("bm_decompose: harmonic input goes entirely to w") {
  auto grid = Grid::disk({0, 0}, 1.0, 128);
  ScalarField u = ScalarField::sample(grid, [](Point p) { return p.x; });
  Decomposition d = bm_decompose(u);
  const Grid& g = u.grid();
  for (int id = 0; id < g.size(); ++id)
    if (g.inside_id(id)) {
      CHECK(std::abs(d.v.at_id(id)) <= 1e-10);
      CHECK(d.w.at_id(id) == doctest::Approx(u.at_id(id)).epsilon(1e-10));
    }
  CHECK(d.residual <= 1e-7);
}

TEST_CASE("bm_decompose: zero-boundary input goes entirely to v") {
  auto grid = Grid::disk({0, 0}, 1.0, 256);
  ScalarField u = ScalarField::sample(
      grid, [](Point p) { return 1.0 - dot(p, p); });
  Decomposition d = bm_decompose(u);
  const Grid& g = u.grid();
  double worst_w = 0;
  for (int id = 0; id < g.size(); ++id)
    if (g.inside_id(id)) worst_w = std::max(worst_w, std::abs(d.w.at_id(id)));
  // w carries only the boundary-ring values of u, of size O(h)
  CHECK(worst_w <= 0.05);
}

TEST_CASE("bm_decompose: exact sum, small residual, mean value property") {
  auto grid = Grid::disk({0, 0}, 1.0, 256);
  std::mt19937 rng(23);
  ScalarField u = trig_field(grid, rng, 0.8);
  Decomposition d = bm_decompose(u);

  const Grid& g = u.grid();
  for (int id = 0; id < g.size(); ++id)
    if (g.inside_id(id))
      CHECK(d.v.at_id(id) + d.w.at_id(id) ==
            doctest::Approx(u.at_id(id)).epsilon(1e-14));
  CHECK(d.residual <= 1e-6);

  // harmonic part satisfies the circle mean value property
  for (double r : {0.2, 0.4}) {
    double mean = 0;
    const int n = 512;
    for (int k = 0; k < n; ++k) {
      double th = 2 * kPi * k / n;
      auto s = d.w.interp({r * std::cos(th), r * std::sin(th)});
      REQUIRE(s.has_value());
      mean += *s;
    }
    mean /= n;
    auto c = d.w.interp({0, 0});
    REQUIRE(c.has_value());
    CHECK(std::abs(*c - mean) <= 1e-3);
  }
}

TEST_CASE("bm_decompose is linear in the input") {
  auto grid = Grid::disk({0, 0}, 1.0, 128);
  std::mt19937 rng(29);
  ScalarField u1 = trig_field(grid, rng, 0.7);
  ScalarField u2 = trig_field(grid, rng, 0.5);
  Decomposition d1 = bm_decompose(u1);
  Decomposition d2 = bm_decompose(u2);
  Decomposition ds = bm_decompose(add(u1, u2));
  const Grid& g = u1.grid();
  double worst = 0;
  for (int id = 0; id < g.size(); ++id)
    if (g.inside_id(id))
      worst = std::max(worst, std::abs(ds.v.at_id(id) - d1.v.at_id(id) -
                                       d2.v.at_id(id)));
  CHECK(worst <= 1e-8);
}

TEST_CASE("gauss_curvature: flat, affine, spherical") {
  auto grid = Grid::square(1.0, 256);
  CurvatureField flat = gauss_curvature(ScalarField(grid, 0.0));
  CHECK(flat.total_abs == 0.0);

  ScalarField lin = ScalarField::sample(
      grid, [](Point p) { return 2.0 * p.x - std::log(3.0); });
  CurvatureField lk = gauss_curvature(lin);
  const Grid& ig = lk.K.grid();
  double worst = 0;
  for (int id = 0; id < ig.size(); ++id)
    if (ig.inside_id(id)) worst = std::max(worst, std::abs(lk.K.at_id(id)));
  CHECK(worst <= 1e-8);

  ScalarField sph = ScalarField::sample(
      grid, [](Point p) { return -std::log1p(0.25 * dot(p, p)); });
  CurvatureField sk = gauss_curvature(sph);
  worst = 0;
  for (int id = 0; id < ig.size(); ++id)
    if (ig.inside_id(id))
      worst = std::max(worst, std::abs(sk.K.at_id(id) - 1.0));
  CHECK(worst <= 1e-2);

  // density = K e^{2u} pointwise, total_abs matches its integral
  double total = 0;
  for (int id = 0; id < ig.size(); ++id)
    if (ig.inside_id(id)) {
      CHECK(sk.density.at_id(id) ==
            doctest::Approx(sk.K.at_id(id) * std::exp(2 * sph.at_id(id)))
                .epsilon(1e-9));
      total += std::abs(sk.density.at_id(id));
    }
  CHECK(sk.total_abs == doctest::Approx(total * ig.h() * ig.h()).epsilon(1e-12));
}

TEST_CASE("gauss_curvature shift law") {
  auto grid = Grid::square(1.0, 128);
  std::mt19937 rng(31);
  ScalarField u = trig_field(grid, rng, 0.6);
  double c = 0.8;
  CurvatureField k0 = gauss_curvature(u);
  CurvatureField k1 = gauss_curvature(shift(u, c));
  const Grid& ig = k0.K.grid();
  for (int id = 0; id < ig.size(); ++id) {
    if (!ig.inside_id(id)) continue;
    CHECK(k1.K.at_id(id) ==
          doctest::Approx(std::exp(-2 * c) * k0.K.at_id(id)).epsilon(1e-11));
    CHECK(k1.density.at_id(id) ==
          doctest::Approx(k0.density.at_id(id)).epsilon(1e-11));
  }
}

TEST_CASE("exp_integral_check: flat field and overflow guard") {
  auto grid = Grid::disk({0, 0}, 1.0, 256);
  Region disk = Region::disk({0, 0}, 1.0);
  ScalarField zero(grid, 0.0);
  ExpIntegralCheck chk = exp_integral_check(zero, 1.0, kPi, disk);
  CHECK(chk.bound == doctest::Approx(16.0).epsilon(1e-14));
  CHECK(chk.value == doctest::Approx(kPi).epsilon(0.005));
  CHECK(chk.pass);

  ScalarField huge(grid, 500.0);
  ExpIntegralCheck big = exp_integral_check(huge, 1.0, kPi, disk);
  CHECK_FALSE(big.pass);  // overflows to +inf without raising

  CHECK_THROWS(exp_integral_check(zero, -1.0, kPi, disk));
  CHECK_THROWS(exp_integral_check(zero, 1.0, 13.0, disk));
}

TEST_CASE("exp_integral_check: potentials of unit-mass data stay bounded") {
  auto grid = Grid::disk({0, 0}, 1.0, 128);
  Region disk = Region::disk({0, 0}, 1.0);

  // f = 4: L1 norm 4 pi, eps = pi
  ScalarField f4(grid, 4.0);
  ScalarField v4 = solve_poisson_dirichlet(f4, disk);
  ExpIntegralCheck c4 = exp_integral_check(v4, lp_norm(f4, 1.0, disk), kPi,
                                           disk);
  CHECK(c4.pass);

  std::mt19937 rng(41);
  for (int t = 0; t < 8; ++t) {
    ScalarField f = trig_field(grid, rng, 1.0, 4);
    double l1 = lp_norm(f, 1.0, disk);
    ScalarField v = solve_poisson_dirichlet(scale(f, 1.0 / l1), disk);
    ExpIntegralCheck chk = exp_integral_check(v, 1.0, kPi, disk);
    CHECK(chk.pass);
    CHECK(weak_l2_norm(grad_magnitude(v), disk) <= 0.15);  // frozen c_bm
  }
}

TEST_CASE("extend_complete: zero, restriction equality, curvature bound") {
  auto grid = Grid::disk({0, 0}, 1.0, 256);
  Extension z = extend_complete(ScalarField(grid, 0.0));
  CHECK(z.total_curvature == 0.0);

  ScalarField u = ScalarField::sample(grid, [](Point p) { return p.x; });
  Extension e = extend_complete(u);
  const Grid& eg = e.u_ext.grid();
  // equality on the inner plateau, zero beyond the cutoff support
  for (int id = 0; id < eg.size(); ++id) {
    Point p = eg.center_id(id);
    if (norm(p) < 0.625) CHECK(e.u_ext.at_id(id) == p.x);
    if (norm(p) > 0.875) CHECK(e.u_ext.at_id(id) == 0.0);
  }

  Region disk = Region::disk({0, 0}, 1.0 - 2.0 / 256);
  double data = lp_norm(u, 1.0, disk) +
                lp_norm(grad_magnitude(u), 1.0, disk) +
                lp_norm(laplacian(u), 1.0, disk);
  const double c_extension = 12.0;  // frozen regression constant
  CHECK(e.total_curvature <= c_extension * data);
  CHECK(e.total_curvature > 0.0);
}

TEST_CASE("extension cutoff profile") {
  CHECK(extension_cutoff(0.5) == 1.0);
  CHECK(extension_cutoff(0.95) == 0.0);
  CHECK(extension_cutoff(0.75) == doctest::Approx(0.5).epsilon(1e-12));
  // C^1 joins: derivative vanishes at both plateau edges
  CHECK(extension_cutoff_dr(0.625) == 0.0);
  CHECK(extension_cutoff_dr(0.875) == 0.0);
  CHECK(extension_cutoff_dr(0.75) < 0.0);
}
