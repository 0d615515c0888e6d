#pragma once

#include <vector>

#include "confgeo/field.hpp"
#include "confgeo/metric.hpp"

namespace confgeo {

// Labeled point set with a symmetric distance matrix. Zero diagonal,
// symmetry and all triangle inequalities are validated at construction.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace(std::vector<Point> labels,
                    std::vector<std::vector<double>> dist);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<Point>& labels() const { return labels_; }
  double d(int i, int j) const { return dist_[i][j]; }
  const std::vector<std::vector<double>>& matrix() const { return dist_; }

  double diameter() const;
  double radius() const;  // min over points of max distance

  // CSV: first line n, then n^2 matrix entries row-major.
  std::string csv() const;
  static FiniteMetricSpace from_csv(std::istream& in,
                                    std::vector<Point> labels = {});

 private:
  std::vector<Point> labels_;
  std::vector<std::vector<double>> dist_;
};

// n landmarks by farthest-point sampling seeded at the region center, with
// pairwise graph distances. Deterministic for a fixed metric and region.
FiniteMetricSpace sample_space(const ConformalMetric& m, const Region& region,
                               int n);

// Exact Gromov-Hausdorff distance, as half the minimal correspondence
// distortion, by branch-and-bound over map pairs (f: X->Y, g: Y->X). Sizes
// are capped at 7; beyond that use gh_bounds.
double gh_exact(const FiniteMetricSpace& X, const FiniteMetricSpace& Y);

struct GhBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// lower: half the larger of |diam X - diam Y| and |rad X - rad Y| (both are
// correspondence-distortion lower bounds). upper: half the distortion of a
// greedy correspondence refined by single-point reassignments.
GhBounds gh_bounds(const FiniteMetricSpace& X, const FiniteMetricSpace& Y);

}  // namespace confgeo
