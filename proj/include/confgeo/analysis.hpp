#pragma once

#include <functional>
#include <map>
#include <vector>

#include "confgeo/config.hpp"
#include "confgeo/field.hpp"
#include "confgeo/metric.hpp"
#include "confgeo/norms.hpp"

namespace confgeo {

enum class FamilyKind { Collapse, Bubble, Neck, Mobius, Sphere, Custom };

// Indexed sequence of conformal metrics, generated on demand and cached.
class MetricFamily {
 public:
  MetricFamily(int k_min, int k_max, FamilyKind kind,
               std::function<ConformalMetric(int)> gen);

  int k_min() const { return k_min_; }
  int k_max() const { return k_max_; }
  FamilyKind kind() const { return kind_; }
  const ConformalMetric& member(int k) const;

 private:
  int k_min_, k_max_;
  FamilyKind kind_;
  std::function<ConformalMetric(int)> gen_;
  mutable std::map<int, ConformalMetric> cache_;
};

// u_k = k x1 - log a_k on the unit disk, a_k chosen so the metric area of
// the disk is exactly 1 in the grid quadrature.
MetricFamily gen_collapse_family(int k_min, int k_max, int res = 256);

// Spherical profile of curvature 1 at the given scale:
// u = -log(1 + |x-p|^2 / (4 s^2)) - log s. Multi-center members superpose
// area densities, so separated bubbles each carry mass near 4 pi.
ScalarField bubble_profile(std::shared_ptr<const Grid> grid, Point p,
                           double s);
ScalarField multi_bubble(std::shared_ptr<const Grid> grid,
                         const std::vector<std::pair<Point, double>>& bubbles);
MetricFamily gen_bubble_family(const std::vector<double>& scales, Point center,
                               int res = 512, double box_half = 1.0);

// Round-sphere chart factor u = -log(1 + |x|^2/4) concentrated by the chart
// affine map x -> x_star + r_k x (a sphere Moebius transformation).
double round_chart_factor(Point x);
MetricFamily gen_mobius_family(const std::vector<double>& scales, Point x_star,
                               int res = 1024, double box_half = 2.0);

// Flat annulus(1/4, 4) grids with harmonic perturbations of the given size;
// member 0 is exactly flat.
MetricFamily gen_neck_family(int members, double size, int res = 512);

// Sphere factors with pointwise curvature >= 1: Moebius pullbacks of the
// round factor scaled down by 1/c (curvature c^2).
MetricFamily gen_sphere_k1_family(int members, int res = 512,
                                  double box_half = 8.0);

// Largest ladder radius t with curvature mass of D_t(x) at most eps/2;
// capped at the distance from x to the grid box edge when the mass never
// gets there. `density` is |K| e^{2u} per unit plane area (= |lap u|).
double concentration_radius(const ConformalMetric& m, Point x, double eps,
                            const RadiusLadder& ladder = {2.0, 1.05});

struct BlowupRecord {
  int k = 0;
  Point center{};
  double scale = 0.0;   // bubble-scale estimate
  double shift = 0.0;   // log of the scale used in the rescaling
  ScalarField rescaled;
  enum class Verdict { Bubble, Collapse, Converged } verdict =
      Verdict::Converged;
  double mass = 0.0;    // curvature mass captured by the concentration disk

  explicit BlowupRecord(ScalarField field) : rescaled(std::move(field)) {}
};

// Per member: repeatedly locate the cell minimizing the concentration
// radius, refine center (density centroid) and radius (exact mass
// crossing), emit the rescaled window, mask the extracted disk, and recurse
// on the remaining mass until it drops below eps/2 or nothing concentrates.
std::vector<BlowupRecord> extract_bubble(const MetricFamily& family,
                                         double eps,
                                         int rescale_res = 256);

struct Atom {
  Point location{};
  double mass = 0.0;
  double radius = 0.0;  // radius at which the mass was measured
};

struct AtomSet {
  std::vector<Atom> atoms;
};

// Cells of the family's last member whose curvature mass inside the
// detection radius exceeds the threshold, clustered by 8-connectivity.
// detect_radius_cells/mass_radius_cells are in units of h (0 = defaults).
AtomSet detect_atoms(const MetricFamily& family, double threshold,
                     double detect_radius_cells = 8.0,
                     double mass_radius_cells = 40.0);

struct CollapseRow {
  int k = 0;
  char verdict = 'a';
  double c_k = 0.0;
  double area_r = 0.0;  // filled for verdict (b)
  double diam_r = 0.0;  // filled for verdict (b)
};

// c_k = disk mean of u_k over D_{1/4}; family verdict (a) when the spread of
// the last quartile of {c_k} stays at most 1, else (b) with per-member area
// and diameter of D_r attached.
std::vector<CollapseRow> classify_collapse(const MetricFamily& family,
                                           double r, int diam_landmarks = 16);

// Minimum of the JN radius of u over a 17 x 17 lattice of centers in the
// closed disk of radius 1/2.
double jn_floor(const ConformalMetric& m, double lambda,
                const Region& omega);

struct LinearFit {
  double a = 0.0, b = 0.0, c = 0.0;
  double residual = 0.0;  // L1 deviation over the disk of radius 2
  bool nontrivial = false;
};

// Least-squares affine fit of the rescaled field on D_2.
LinearFit linear_blowup_check(const BlowupRecord& rec);

struct MobiusResult {
  Point center{};
  double scale = 1.0;
  bool found = false;  // false: no concentration, identity returned
  ScalarField renormalized;

  explicit MobiusResult(ScalarField field) : renormalized(std::move(field)) {}
};

// Locate the curvature concentration of a sphere-chart factor and pull the
// factor back by the chart map x -> center + scale * x (with the +log scale
// factor correction), so a concentrated round sphere renormalizes back to
// the round factor.
MobiusResult mobius_renormalize(const ConformalMetric& m, double eps,
                                double window_half = 6.0, int window_res = 512);

// Canonical-profile radius factor: the radius of curvature mass eps/2 on a
// unit-scale spherical bubble. Used to convert a mass radius into a bubble
// scale estimate.
double bubble_mass_radius_factor(double eps);

}  // namespace confgeo
