#include "confgeo/pde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace confgeo {

namespace {

constexpr double kPi = std::numbers::pi;

// Fraction of the segment from an inside center to an outside neighbor at
// which the region boundary sits. 1 when the region does not separate them
// (mask-only boundary).
double cut_fraction(const Region& omega, Point in, Point out) {
  if (!omega.contains(in) || omega.contains(out)) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 40; ++it) {
    double mid = 0.5 * (lo + hi);
    Point p = in + mid * (out - in);
    (omega.contains(p) ? lo : hi) = mid;
  }
  return std::max(0.5 * (lo + hi), 1e-2);
}

struct StencilSystem {
  const Grid* grid = nullptr;
  std::vector<int> cells;       // unknown ids
  std::vector<int> slot;        // grid id -> unknown index or -1
  std::vector<double> diag;     // per unknown, in units of 1/h^2
  std::vector<int> nbr;         // 4 entries per unknown, -1 when Dirichlet
  double inv_h2 = 0.0;

  void apply(const std::vector<double>& x, std::vector<double>& y) const {
    size_t n = cells.size();
    for (size_t k = 0; k < n; ++k) {
      double s = diag[k] * x[k];
      for (int d = 0; d < 4; ++d) {
        int m = nbr[4 * k + d];
        if (m >= 0) s -= x[m];
      }
      y[k] = s * inv_h2;
    }
  }
};

StencilSystem build_system(const Grid& g, const Region& omega,
                           DirichletModel model) {
  StencilSystem sys;
  sys.grid = &g;
  sys.inv_h2 = 1.0 / (g.h() * g.h());
  sys.slot.assign(g.size(), -1);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!g.inside(i, j)) continue;
      if (!omega.contains(g.center(i, j))) continue;
      sys.slot[g.id(i, j)] = static_cast<int>(sys.cells.size());
      sys.cells.push_back(g.id(i, j));
    }
  if (sys.cells.empty())
    throw std::runtime_error("poisson: empty solve region");
  size_t n = sys.cells.size();
  sys.diag.assign(n, 0.0);
  sys.nbr.assign(4 * n, -1);
  const int di[4] = {1, -1, 0, 0};
  const int dj[4] = {0, 0, 1, -1};
  for (size_t k = 0; k < n; ++k) {
    int id = sys.cells[k];
    int i = id % g.nx(), j = id / g.nx();
    Point c = g.center(i, j);
    for (int d = 0; d < 4; ++d) {
      int ii = i + di[d], jj = j + dj[d];
      bool nbr_in = g.inside(ii, jj) && sys.slot[g.id(ii, jj)] >= 0;
      if (nbr_in) {
        sys.nbr[4 * k + d] = sys.slot[g.id(ii, jj)];
        sys.diag[k] += 1.0;
      } else if (model == DirichletModel::RegionCut) {
        Point out{c.x + di[d] * g.h(), c.y + dj[d] * g.h()};
        sys.diag[k] += 1.0 / cut_fraction(omega, c, out);
      } else {
        sys.diag[k] += 1.0;
      }
    }
  }
  return sys;
}

}  // namespace

ScalarField solve_poisson_dirichlet(const ScalarField& f, const Region& omega,
                                    const PoissonOptions& opts) {
  const Grid& g = f.grid();
  StencilSystem sys = build_system(g, omega, opts.boundary);
  size_t n = sys.cells.size();
  std::vector<double> b(n), x(n, 0.0), r(n), p(n), ap(n);
  for (size_t k = 0; k < n; ++k) b[k] = f.at_id(sys.cells[k]);

  double b_norm = 0.0;
  for (double v : b) b_norm += v * v;
  b_norm = std::sqrt(b_norm);
  if (b_norm == 0.0) {
    ScalarField out(f.grid_ptr(), 0.0);
    return out;
  }

  r = b;
  p = r;
  double rr = 0.0;
  for (double v : r) rr += v * v;
  int max_iter = opts.max_iter_factor * (g.nx() + g.ny());
  double target = opts.tol * b_norm;
  int it = 0;
  for (; it < max_iter; ++it) {
    if (std::sqrt(rr) <= target) break;
    sys.apply(p, ap);
    double pap = 0.0;
    for (size_t k = 0; k < n; ++k) pap += p[k] * ap[k];
    double alpha = rr / pap;
    for (size_t k = 0; k < n; ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * ap[k];
    }
    double rr_new = 0.0;
    for (double v : r) rr_new += v * v;
    double beta = rr_new / rr;
    rr = rr_new;
    for (size_t k = 0; k < n; ++k) p[k] = r[k] + beta * p[k];
  }
  if (std::sqrt(rr) > target)
    throw std::runtime_error("poisson: no convergence, residual " +
                             std::to_string(std::sqrt(rr) / b_norm));

  ScalarField out(f.grid_ptr(), 0.0);
  for (size_t k = 0; k < n; ++k) out.set_id(sys.cells[k], x[k]);
  return out;
}

Decomposition bm_decompose(const ScalarField& u, const PoissonOptions& opts) {
  ScalarField lap_u = laplacian(u);
  ScalarField rhs = scale(lap_u, -1.0);
  PoissonOptions solve_opts = opts;
  // The decomposition is a statement about the discrete operator, so the
  // Dirichlet value sits at the cell centers of the boundary ring.
  solve_opts.boundary = DirichletModel::CellZero;
  ScalarField v_int = solve_poisson_dirichlet(rhs, Region::everywhere(),
                                              solve_opts);
  ScalarField v = embed(v_int, u.grid_ptr(), 0.0);
  ScalarField w = sub(u, v);

  ScalarField lap_w = laplacian(w);
  const Grid& ig = lap_w.grid();
  double res = 0.0;
  for (int id = 0; id < ig.size(); ++id)
    if (ig.inside_id(id)) res = std::max(res, std::abs(lap_w.at_id(id)));
  return {std::move(v), std::move(w), res};
}

CurvatureField gauss_curvature(const ScalarField& u) {
  ScalarField lap_u = laplacian(u);
  ScalarField density = scale(lap_u, -1.0);
  const Grid& ig = density.grid();
  ScalarField K(density.grid_ptr());
  double total = 0.0;
  for (int id = 0; id < ig.size(); ++id) {
    if (!ig.inside_id(id)) continue;
    double d = density.at_id(id);
    K.set_id(id, d * std::exp(-2.0 * u.at_id(id)));
    total += std::abs(d);
  }
  return {std::move(K), std::move(density), total * ig.h() * ig.h()};
}

ExpIntegralCheck exp_integral_check(const ScalarField& u, double f_l1,
                                    double eps, const Region& region) {
  if (!(f_l1 > 0)) throw std::invalid_argument("exp_integral: f_l1 <= 0");
  if (!(eps > 0 && eps < 4 * kPi))
    throw std::invalid_argument("exp_integral: eps outside (0, 4pi)");
  const Grid& g = u.grid();
  double coef = (4 * kPi - eps) / f_l1;
  double m = -std::numeric_limits<double>::infinity();
  std::vector<double> expo;
  for (int id = 0; id < g.size(); ++id) {
    if (!g.inside_id(id) || !region.contains(g.center_id(id))) continue;
    double a = coef * std::abs(u.at_id(id));
    expo.push_back(a);
    m = std::max(m, a);
  }
  if (expo.empty()) throw std::runtime_error("exp_integral: empty region");
  double s = 0.0;
  for (double a : expo) s += std::exp(a - m);
  double log_value = m + std::log(s) + 2.0 * std::log(g.h());
  ExpIntegralCheck out;
  out.value = std::exp(log_value);
  out.bound = 16.0 * kPi * kPi / (eps * eps);
  out.pass = out.value <= out.bound;
  return out;
}

// Quintic smoothstep from 1 at r=5/8 down to 0 at r=7/8.
double extension_cutoff(double r) {
  if (r <= 0.625) return 1.0;
  if (r >= 0.875) return 0.0;
  double s = (r - 0.625) / 0.25;
  return 1.0 - (10.0 * s * s * s - 15.0 * s * s * s * s + 6.0 * s * s * s * s * s);
}

double extension_cutoff_dr(double r) {
  if (r <= 0.625 || r >= 0.875) return 0.0;
  double s = (r - 0.625) / 0.25;
  return -(30.0 * s * s - 60.0 * s * s * s + 30.0 * s * s * s * s) / 0.25;
}

double extension_cutoff_ddr(double r) {
  if (r <= 0.625 || r >= 0.875) return 0.0;
  double s = (r - 0.625) / 0.25;
  return -(60.0 * s - 180.0 * s * s + 120.0 * s * s * s) / (0.25 * 0.25);
}

Extension extend_complete(const ScalarField& u) {
  const Grid& g = u.grid();
  // Target grid: the source box with a full mask.
  auto box = Grid::rect(g.nx(), g.ny(), g.x0(), g.y0(), g.h());
  ScalarField u_ext(box, 0.0);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      Point c = g.center(i, j);
      double eta = extension_cutoff(norm(c));
      if (eta == 0.0) continue;
      if (!g.inside(i, j))
        throw std::runtime_error("extend: u undefined where cutoff > 0");
      u_ext.set(i, j, eta * u.at(i, j));
    }

  auto [ux, uy] = gradient(u);
  ScalarField lap_u = laplacian(u);
  const Grid& ig = lap_u.grid();
  double total = 0.0;
  for (int id = 0; id < ig.size(); ++id) {
    if (!ig.inside_id(id)) continue;
    Point c = ig.center_id(id);
    double r = norm(c);
    double eta = extension_cutoff(r);
    double etar = extension_cutoff_dr(r);
    double etarr = extension_cutoff_ddr(r);
    if (eta == 0.0 && etar == 0.0) continue;
    double lap_eta = r > 1e-12 ? etarr + etar / r : 2.0 * etarr;
    double gx = r > 1e-12 ? etar * c.x / r : 0.0;
    double gy = r > 1e-12 ? etar * c.y / r : 0.0;
    double neg_lap =
        u.at_id(id) * lap_eta + 2.0 * (ux.at_id(id) * gx + uy.at_id(id) * gy) +
        eta * lap_u.at_id(id);
    total += std::abs(neg_lap);
  }
  return {std::move(u_ext), total * ig.h() * ig.h()};
}

}  // namespace confgeo
