#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "confgeo/field.hpp"
#include "confgeo/pde.hpp"

using namespace confgeo;
namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("grid construction and invariants") {
  CHECK_THROWS(Grid(4, 4, 0, 0, -1.0, std::vector<uint8_t>(16, 1)));
  CHECK_THROWS(Grid(4, 4, 0, 0, 0.5, std::vector<uint8_t>(16, 0)));
  CHECK_THROWS(Grid(4, 4, 0, 0, 0.5, std::vector<uint8_t>(15, 1)));

  auto disk = Grid::disk({0, 0}, 1.0, 128);
  CHECK(disk->inside_connected());
  CHECK(disk->inside_count() > 0.7 * kPi / 4 * 128 * 128);
  CHECK(disk->inside(64, 64));
  CHECK_FALSE(disk->inside(0, 0));  // corner outside the disk

  auto cell = disk->cell_at({0.3, -0.2});
  REQUIRE(cell.has_value());
  Point c = disk->center(cell->first, cell->second);
  CHECK(std::abs(c.x - 0.3) <= disk->h());
  CHECK(std::abs(c.y + 0.2) <= disk->h());
  CHECK_FALSE(disk->cell_at({1.5, 0}).has_value());

  // two disjoint blocks: raw construction works, connectivity reports false
  std::vector<uint8_t> mask(64, 0);
  mask[0] = mask[63] = 1;
  Grid split(8, 8, 0, 0, 1.0, mask);
  CHECK_FALSE(split.inside_connected());
}

TEST_CASE("field sampling and interpolation") {
  auto grid = Grid::square(1.0, 64);
  ScalarField f = ScalarField::sample(
      grid, [](Point p) { return 2 * p.x - 3 * p.y; });
  // bilinear is exact on affine data
  auto v = f.interp({0.123, -0.456});
  REQUIRE(v.has_value());
  CHECK(*v == doctest::Approx(2 * 0.123 + 3 * 0.456).epsilon(1e-12));

  CHECK_THROWS(ScalarField::sample(
      grid, [](Point) { return std::numeric_limits<double>::quiet_NaN(); }));
}

TEST_CASE("integrate: disk area, odd symmetry, additivity") {
  auto grid = Grid::disk({0, 0}, 1.0, 512);  // h = 1/256
  Region disk = Region::disk({0, 0}, 1.0);
  ScalarField one(grid, 1.0);
  CHECK(integrate(one, disk) == doctest::Approx(kPi).epsilon(0.005));

  ScalarField x1 = ScalarField::sample(grid, [](Point p) { return p.x; });
  CHECK(std::abs(integrate(x1, disk)) <= 1e-10);

  // additive over disjoint halves up to reassociation
  Region left = Region::rect(-1, -1, 0, 1);
  Region right = Region::rect(std::nextafter(0.0, 1.0), -1, 1, 1);
  double a = integrate(one, left) + integrate(one, right);
  CHECK(a ==
        doctest::Approx(integrate(one, Region::everywhere())).epsilon(1e-12));

  CHECK_THROWS_WITH(integrate(one, Region::disk({5, 5}, 0.1)),
                    doctest::Contains("empty region"));
}

TEST_CASE("integrate: spherical area element over a large disk") {
  auto grid = Grid::square(100.0, 1024);
  ScalarField density = ScalarField::sample(grid, [](Point p) {
    double u = -std::log1p(0.25 * dot(p, p));
    return std::exp(2 * u);
  });
  double total = integrate(density, Region::disk({0, 0}, 100.0));
  CHECK(total == doctest::Approx(4 * kPi).epsilon(0.01));
}

TEST_CASE("laplacian: exact on quadratics, O(h^2) on the sphere factor") {
  auto grid = Grid::square(1.0, 256);
  ScalarField q = ScalarField::sample(
      grid, [](Point p) { return p.x * p.x - p.y * p.y; });
  ScalarField lq = laplacian(q);
  const Grid& ig = lq.grid();
  double worst = 0;
  for (int id = 0; id < ig.size(); ++id)
    if (ig.inside_id(id)) worst = std::max(worst, std::abs(lq.at_id(id)));
  CHECK(worst <= 1e-10);

  ScalarField r2 = ScalarField::sample(
      grid, [](Point p) { return 0.25 * dot(p, p); });
  ScalarField lr = laplacian(r2);
  worst = 0;
  for (int id = 0; id < ig.size(); ++id)
    if (ig.inside_id(id)) worst = std::max(worst, std::abs(lr.at_id(id) - 1.0));
  CHECK(worst <= 1e-10);

  ScalarField u = ScalarField::sample(
      grid, [](Point p) { return -std::log1p(0.25 * dot(p, p)); });
  ScalarField lu = laplacian(u);
  worst = 0;
  for (int id = 0; id < ig.size(); ++id) {
    if (!ig.inside_id(id)) continue;
    double expect = -std::exp(2 * u.at_id(id));
    worst = std::max(worst, std::abs(lu.at_id(id) - expect));
  }
  CHECK(worst <= 1e-4);

  // annihilates affine fields exactly; additive
  ScalarField aff = ScalarField::sample(
      grid, [](Point p) { return 3.0 * p.x - 2.0 * p.y + 0.7; });
  ScalarField la = laplacian(aff);
  worst = 0;
  for (int id = 0; id < ig.size(); ++id)
    if (ig.inside_id(id)) worst = std::max(worst, std::abs(la.at_id(id)));
  CHECK(worst <= 1e-10);

  ScalarField sum_l = laplacian(add(q, u));
  ScalarField l_sum = add(laplacian(q), laplacian(u));
  worst = 0;
  for (int id = 0; id < ig.size(); ++id)
    if (ig.inside_id(id))
      worst = std::max(worst, std::abs(sum_l.at_id(id) - l_sum.at_id(id)));
  CHECK(worst <= 1e-9);
}

TEST_CASE("rescale_blowup: shift constant, affine exactness, identity") {
  auto grid = Grid::square(1.0, 256);
  ScalarField zero(grid, 0.0);
  ScalarField half = rescale_blowup(zero, {0, 0}, 0.5, true, 0.8, 64);
  const Grid& hg = half.grid();
  for (int id = 0; id < hg.size(); ++id)
    if (hg.inside_id(id))
      CHECK(half.at_id(id) == doctest::Approx(std::log(0.5)).epsilon(1e-12));

  ScalarField x1 = ScalarField::sample(grid, [](Point p) { return p.x; });
  ScalarField rs = rescale_blowup(x1, {0, 0}, 0.3, true, 1.0, 64);
  const Grid& rg = rs.grid();
  for (int id = 0; id < rg.size(); ++id)
    if (rg.inside_id(id)) {
      double expect = 0.3 * rg.center_id(id).x + std::log(0.3);
      CHECK(rs.at_id(id) == doctest::Approx(expect).epsilon(1e-9));
    }

  // identity on grid points: r=1, no shift, matching window grid
  ScalarField f = ScalarField::sample(
      grid, [](Point p) { return std::sin(3 * p.x) + p.y; });
  ScalarField ident = rescale_blowup(f, {0, 0}, 1.0, false, 1.0, 256);
  const Grid& igr = ident.grid();
  for (int id = 0; id < igr.size(); ++id) {
    if (!igr.inside_id(id)) continue;
    auto cell = grid->cell_at(igr.center_id(id));
    REQUIRE(cell.has_value());
    CHECK(ident.at_id(id) ==
          doctest::Approx(f.at(cell->first, cell->second)).epsilon(1e-12));
  }

  CHECK_THROWS(rescale_blowup(f, {50, 50}, 0.1, false, 1.0, 32));
}

TEST_CASE("rescale_blowup preserves Gauss curvature at matched points") {
  // The rescale target is kept coarser than the source so the stencil does
  // not resolve the creases of the bilinear interpolant.
  auto grid = Grid::square(1.0, 1024);
  ScalarField u = ScalarField::sample(grid, [](Point p) {
    return 0.4 * std::cos(2 * p.x + 1) * std::sin(1.5 * p.y) + 0.2 * p.x;
  });
  Point xk{0.2, -0.1};
  double r = 0.5;
  ScalarField rs = rescale_blowup(u, xk, r, true, 1.0, 64);
  CurvatureField K0 = gauss_curvature(u);
  CurvatureField K1 = gauss_curvature(rs);
  for (Point y : {Point{0, 0}, Point{0.4, 0.3}, Point{-0.6, 0.5}}) {
    auto a = K1.K.interp(y);
    auto b = K0.K.interp({xk.x + r * y.x, xk.y + r * y.y});
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(*a == doctest::Approx(*b).epsilon(0.02));
  }
}

TEST_CASE("confgrid round trip") {
  auto grid = Grid::disk({0.5, -0.25}, 0.75, 96);
  ScalarField f = ScalarField::sample(
      grid, [](Point p) { return std::sin(5 * p.x) * p.y + 0.1; });
  std::stringstream ss;
  write_confgrid(f, ss);
  ScalarField g = read_confgrid(ss);
  CHECK(g.grid().nx() == grid->nx());
  CHECK(g.grid().ny() == grid->ny());
  CHECK(g.grid().h() == doctest::Approx(grid->h()).epsilon(1e-15));
  for (int id = 0; id < grid->size(); ++id) {
    CHECK(g.grid().inside_id(id) == grid->inside_id(id));
    if (grid->inside_id(id)) CHECK(g.at_id(id) == f.at_id(id));
  }

  std::stringstream bad("3 3 0 0 nonsense");
  CHECK_THROWS(read_confgrid(bad));
  std::stringstream trunc("2 2 0 0 0.5\n1 2 3");
  CHECK_THROWS(read_confgrid(trunc));
}

TEST_CASE("embed copies by position") {
  auto src = Grid::square(1.0, 64);
  ScalarField f = ScalarField::sample(src, [](Point p) { return p.x + p.y; });
  auto dst = Grid::disk({0, 0}, 0.5, 64);
  ScalarField e = embed(f, dst, -7.0);
  const Grid& g = *dst;
  for (int id = 0; id < g.size(); ++id)
    if (g.inside_id(id)) {
      Point p = g.center_id(id);
      auto cell = src->cell_at(p);
      REQUIRE(cell.has_value());
      CHECK(e.at_id(id) == f.at(cell->first, cell->second));
    }
}
