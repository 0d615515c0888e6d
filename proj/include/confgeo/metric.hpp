#pragma once

#include <limits>
#include <vector>

#include "confgeo/field.hpp"

namespace confgeo {

// Move set for the shortest-path graph. The default set reaches offsets up
// to (4,1), which brings the worst-direction metrication overestimate down
// to about 0.8% (the king-move set alone sits near 8%, king+knight near
// 2.8%). The oracle set adds longer moves for cross-checks.
struct Stencil {
  std::vector<std::pair<int, int>> moves;  // directed offsets, symmetric

  static const Stencil& king8();
  static const Stencil& knight16();
  static const Stencil& fine40();
  static const Stencil& oracle104();
};

struct NeckReport {
  double c = 0.0;          // mean of u on the circle of radius 3/2
  double ratio_min = 0.0;  // of d(e^{i t}, 2 e^{i s}) / e^c over the angle grid
  double ratio_max = 0.0;
  double area_ratio = 0.0;       // area(annulus(1,2)) / e^{2c}
  double curvature_energy = 0.0; // integral of |K| e^{2u} over annulus(1/2,4)

  std::string csv_row() const;
};

// e^{2u} times the Euclidean metric, queried through shortest paths on the
// stencil graph with trapezoidal e^u edge weights. Immutable after
// construction; every query uses its own scratch, so concurrent queries on
// one metric are safe.
class ConformalMetric {
 public:
  explicit ConformalMetric(ScalarField u, Stencil stencil = Stencil::fine40());

  const ScalarField& u() const { return u_; }
  const Grid& grid() const { return u_.grid(); }
  double conformal_factor(int id) const { return eu_[id]; }

  // Graph distances from a source point to every cell; unreachable cells
  // hold +inf. Off-lattice sources are tied into the graph with exact
  // segment weights to the nearby cell centers.
  std::vector<double> distances_from(Point src) const;
  std::vector<double> distances_from_cell(int id) const;

  // Shortest-path distance between two points. Throws "disconnected" when
  // they lie in different mask components.
  double distance(Point x, Point y) const;

  // Length of a polyline, segments subdivided to at most h.
  double curve_length(const std::vector<Point>& polyline) const;

  // Metric area of the region: integral of e^{2u}.
  double area(const Region& region) const;

  // Cells within graph distance r of z, as a cell-set region.
  Region geodesic_ball(Point z, double r) const;

  double ball_volume_ratio(Point z, double r) const;

  // Farthest-point landmark estimate (a lower bound) of the diameter of the
  // region under the ambient metric; switches to exact all-pairs when the
  // whole grid has at most exact_cells cells.
  double diameter(const Region& region, int landmarks = 32,
                  int exact_cells = 4096) const;

  // Landmark cells by farthest-point sampling in the plane geometry of the
  // cell centers, seeded at the region center. Deterministic, and stable
  // under perturbations of the conformal factor.
  std::vector<int> farthest_point_sample(const Region& region, int n) const;

 private:
  ScalarField u_;
  std::vector<double> eu_;
  Stencil stencil_;
  std::vector<std::pair<int, double>> link_cells(Point p) const;
  friend NeckReport neck_analysis(const ConformalMetric&, int, int);
};

// Annulus diagnostics on a grid covering annulus(1/4, 4): circle mean of u
// on radius 3/2, boundary-to-boundary distance ratios over an angle grid,
// area ratio of annulus(1,2), and curvature energy over annulus(1/2,4).
NeckReport neck_analysis(const ConformalMetric& m, int circle_samples = 256,
                         int angle_grid = 16);

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace confgeo
