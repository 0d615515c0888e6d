#pragma once

#include <string>

namespace confgeo {

// Thresholds and free parameters of the diagnostics. Every named constant
// used by an experiment appears here exactly once; the CLI can override any
// of them from a JSON config.
struct Constants {
  double eps0 = 4.0;        // curvature-mass smallness gate (must stay < 4pi/3 ~ 4.19)
  double eps1 = 1.0;        // L1 gate for exponential integrability
  double eps2 = 1.0;        // annulus curvature-energy gate for neck reports
  double eps0_prime = 1.0;  // concentration mass unit: min(eps0, eps2) by default
  double lambda = 1.0;      // oscillation level for the JN radius
  double Lambda1 = 10.0;    // volume-ratio gate
  double Lambda2 = 10.0;    // area gate
  double Lambda3 = 10.0;    // weak-gradient / L1 gate

  // Frozen regression constants, calibrated once on the fixed test families.
  double neck_C1 = 0.85;       // lower distance-ratio envelope
  double neck_C2 = 3.70;       // upper distance-ratio envelope
  double neck_C1p = 8.9;       // lower area-ratio envelope
  double neck_C2p = 10.0;      // upper area-ratio envelope
  double c_bm = 0.15;          // weak L2 of grad v per unit L1 of f
  double c_gradient = 3.0;     // harmonic gradient bound times a / lambda
  double c_extension = 12.0;   // total curvature per L1 data in extend_complete
  double a_positivity = 0.2;   // distance floor at separation 1/2
  double gh_converge = 0.05;   // GH upper bound target at the last index

  double atom_threshold() const { return 0.5 * eps0_prime; }
};

}  // namespace confgeo
