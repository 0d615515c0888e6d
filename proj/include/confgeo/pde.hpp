#pragma once

#include "confgeo/field.hpp"

namespace confgeo {

// How the homogeneous Dirichlet condition is imposed on the solve set.
//   CellZero:  value 0 at the first cell center outside the solve set
//              (exact for the discrete operator; first order in space).
//   RegionCut: ghost values eliminated against the zero level on the region
//              boundary located between cell centers, which keeps the system
//              symmetric and restores second-order accuracy on smooth
//              domains.
enum class DirichletModel { CellZero, RegionCut };

struct PoissonOptions {
  DirichletModel boundary = DirichletModel::RegionCut;
  double tol = 1e-10;   // relative residual
  int max_iter_factor = 50;  // max iterations = factor * (nx + ny)
};

// Solve -lap(v) = f with v = 0 on the boundary of {inside cells} ∩ omega,
// by conjugate gradients on the five-point operator. Throws on
// non-convergence, with the residual attached to the message.
ScalarField solve_poisson_dirichlet(const ScalarField& f, const Region& omega,
                                    const PoissonOptions& opts = {});

// u = v + w with v the zero-boundary potential of -lap(u) and w = u - v
// discrete-harmonic on interior cells.
struct Decomposition {
  ScalarField v;
  ScalarField w;
  double residual = 0.0;  // max |lap w| over shared interior cells
};

Decomposition bm_decompose(const ScalarField& u,
                           const PoissonOptions& opts = {});

// Gauss curvature of e^{2u} g_euc: K = -e^{-2u} lap u on interior cells,
// density = -lap u (the curvature measure density against dx), and
// total_abs = integral of |K| against the metric area element.
struct CurvatureField {
  ScalarField K;
  ScalarField density;
  double total_abs = 0.0;
};

CurvatureField gauss_curvature(const ScalarField& u);

// Checks integral of exp((4pi - eps)|u| / f_l1) over the region against the
// bound 16 pi^2 / eps^2. The sum is accumulated in log-sum-exp form so large
// exponents cannot overflow intermediate terms.
struct ExpIntegralCheck {
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

ExpIntegralCheck exp_integral_check(const ScalarField& u, double f_l1,
                                    double eps, const Region& region);

// Multiply u by the radial cutoff (1 on |x| <= 5/8, 0 from 7/8 on, quintic
// smoothstep between) and extend by zero to the full grid box. Also returns
// the total curvature of the extended metric, integrated from
// K' = e^{-2 eta u} (-u lap(eta) - 2 grad(u).grad(eta) - eta lap(u)).
struct Extension {
  ScalarField u_ext;
  double total_curvature = 0.0;
};

Extension extend_complete(const ScalarField& u);

// Cutoff profile used by extend_complete; exposed for tests.
double extension_cutoff(double r);
double extension_cutoff_dr(double r);
double extension_cutoff_ddr(double r);

}  // namespace confgeo
