#pragma once

#include <string>

#include "confgeo/field.hpp"

namespace confgeo {

// Geometric radius ladder used wherever a supremum over radii is replaced by
// a finite scan: rungs r_min * ratio^j with r_min = min_factor * h.
struct RadiusLadder {
  double min_factor = 4.0;
  double ratio = 1.05;
};

struct NormReport {
  enum class Kind { Lp, WeakL2, MeanOsc, JnRadius };
  Kind kind = Kind::Lp;
  double value = 0.0;
  std::string region;
  double param = 0.0;  // p for Lp, t for MeanOsc, lambda for JnRadius

  // One CSV row: kind,region,param,value
  std::string csv_row() const;
};

// (sum |f|^p h^2)^(1/p) over inside cells of the region. Requires p >= 1.
double lp_norm(const ScalarField& f, double p, const Region& region);

// Weak L^{2,inf} quasi-norm sup_t t * measure{|f|>t}^(1/2), computed exactly
// for the cell measure by sorting magnitudes. Level sets smaller than
// min_level_cells are skipped: a grid function cannot resolve them, and for
// fields with point singularities the raw supremum over one-to-few-cell
// sets overshoots by an h-independent factor (the nearest centers sit a
// fixed multiple of h from the singular point while carrying full cells).
double weak_l2_norm(const ScalarField& f, const Region& region,
                    int min_level_cells = 256);

// Mean absolute deviation from the disk average over D_t(x0), both taken in
// the cell measure. Throws "disk not contained" when D_t(x0) leaves the
// field's domain.
double mean_oscillation(const ScalarField& f, Point x0, double t);

// Largest ladder radius r such that every smaller rung t keeps D_t(x0)
// inside omega and mean_oscillation(f,x0,t) <= lambda. Returns 0 when the
// first rung already violates the bound; capped at the distance from x0 to
// the omega boundary.
double jn_radius(const ScalarField& f, Point x0, const Region& omega,
                 double lambda, const RadiusLadder& ladder = {});

}  // namespace confgeo
