#include "confgeo/norms.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <vector>

namespace confgeo {

std::string NormReport::csv_row() const {
  const char* k = "?";
  switch (kind) {
    case Kind::Lp: k = "Lp"; break;
    case Kind::WeakL2: k = "weakL2"; break;
    case Kind::MeanOsc: k = "meanOsc"; break;
    case Kind::JnRadius: k = "jnRadius"; break;
  }
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s,%s,%.12g,%.12g", k, region.c_str(), param,
                value);
  return buf;
}

double lp_norm(const ScalarField& f, double p, const Region& region) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  const Grid& g = f.grid();
  double sum = 0.0;
  size_t n = 0;
  for (int id = 0; id < g.size(); ++id) {
    if (!g.inside_id(id) || !region.contains(g.center_id(id))) continue;
    sum += std::pow(std::abs(f.at_id(id)), p);
    ++n;
  }
  if (n == 0) throw std::runtime_error("lp_norm: empty region");
  return std::pow(sum * g.h() * g.h(), 1.0 / p);
}

double weak_l2_norm(const ScalarField& f, const Region& region,
                    int min_level_cells) {
  const Grid& g = f.grid();
  std::vector<double> mag;
  mag.reserve(g.inside_count());
  for (int id = 0; id < g.size(); ++id) {
    if (!g.inside_id(id) || !region.contains(g.center_id(id))) continue;
    mag.push_back(std::abs(f.at_id(id)));
  }
  if (mag.empty()) throw std::runtime_error("weak_l2_norm: empty region");
  std::sort(mag.begin(), mag.end(), std::greater<double>());
  double h2 = g.h() * g.h();
  size_t start = std::min<size_t>(std::max(min_level_cells, 1), mag.size());
  double best = 0.0;
  for (size_t i = start - 1; i < mag.size(); ++i)
    best = std::max(best, mag[i] * std::sqrt(h2 * (i + 1)));
  return best;
}

namespace {

// Cells of the field's grid whose centers lie in D_t(x0); returns false when
// the disk is not fully resolved by inside cells (it pokes into masked cells
// or outside the grid box).
bool disk_cells(const Grid& g, Point x0, double t, std::vector<int>& out) {
  out.clear();
  if (x0.x - t < g.x0() || x0.x + t > g.x0() + g.nx() * g.h() ||
      x0.y - t < g.y0() || x0.y + t > g.y0() + g.ny() * g.h())
    return false;
  int i0 = std::max(0, static_cast<int>((x0.x - t - g.x0()) / g.h()) - 1);
  int i1 = std::min(g.nx() - 1,
                    static_cast<int>((x0.x + t - g.x0()) / g.h()) + 1);
  int j0 = std::max(0, static_cast<int>((x0.y - t - g.y0()) / g.h()) - 1);
  int j1 = std::min(g.ny() - 1,
                    static_cast<int>((x0.y + t - g.y0()) / g.h()) + 1);
  double t2 = t * t;
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i) {
      Point c = g.center(i, j);
      double dx = c.x - x0.x, dy = c.y - x0.y;
      if (dx * dx + dy * dy >= t2) continue;
      if (!g.inside(i, j)) return false;
      out.push_back(g.id(i, j));
    }
  return !out.empty();
}

}  // namespace

double mean_oscillation(const ScalarField& f, Point x0, double t) {
  std::vector<int> cells;
  if (!disk_cells(f.grid(), x0, t, cells))
    throw std::runtime_error("mean_oscillation: disk not contained");
  double mean = 0.0;
  for (int id : cells) mean += f.at_id(id);
  mean /= cells.size();
  double dev = 0.0;
  for (int id : cells) dev += std::abs(f.at_id(id) - mean);
  return dev / cells.size();
}

double jn_radius(const ScalarField& f, Point x0, const Region& omega,
                 double lambda, const RadiusLadder& ladder) {
  if (!(lambda > 0)) throw std::invalid_argument("jn_radius: lambda <= 0");
  if (!omega.contains(x0))
    throw std::invalid_argument("jn_radius: center outside omega");
  const Grid& g = f.grid();
  double bdist = omega.boundary_distance(x0);
  std::vector<int> cells;
  double r_min = ladder.min_factor * g.h();
  double t = r_min;
  while (true) {
    bool contained = !(std::isfinite(bdist) && t >= bdist) &&
                     disk_cells(g, x0, t, cells);
    if (!contained) {
      // Ran out of room with the oscillation bound intact: the radius is the
      // distance to the boundary (or the last resolvable rung).
      double cap = std::isfinite(bdist) ? bdist : t;
      return std::min(cap, t);
    }
    double mean = 0.0;
    for (int id : cells) mean += f.at_id(id);
    mean /= cells.size();
    double dev = 0.0;
    for (int id : cells) dev += std::abs(f.at_id(id) - mean);
    dev /= cells.size();
    if (dev > lambda) return t == r_min ? 0.0 : t;
    t *= ladder.ratio;
  }
}

}  // namespace confgeo
