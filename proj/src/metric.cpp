#include "confgeo/metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace confgeo {

namespace {

constexpr double kPi = std::numbers::pi;

Stencil make_stencil(std::initializer_list<std::pair<int, int>> base) {
  Stencil s;
  for (auto [a, b] : base) {
    // All eight symmetries, deduplicated.
    std::pair<int, int> cand[8] = {{a, b},   {-a, b},  {a, -b},  {-a, -b},
                                   {b, a},   {-b, a},  {b, -a},  {-b, -a}};
    for (auto m : cand)
      if (std::find(s.moves.begin(), s.moves.end(), m) == s.moves.end())
        s.moves.push_back(m);
  }
  return s;
}

}  // namespace

const Stencil& Stencil::king8() {
  static const Stencil s = make_stencil({{1, 0}, {1, 1}});
  return s;
}

const Stencil& Stencil::knight16() {
  static const Stencil s = make_stencil({{1, 0}, {1, 1}, {2, 1}});
  return s;
}

const Stencil& Stencil::fine40() {
  static const Stencil s =
      make_stencil({{1, 0}, {1, 1}, {2, 1}, {3, 1}, {3, 2}, {4, 1}});
  return s;
}

const Stencil& Stencil::oracle104() {
  static const Stencil s = make_stencil(
      {{1, 0}, {1, 1}, {2, 1}, {3, 1}, {3, 2}, {4, 1}, {4, 3}, {5, 1},
       {5, 2}, {5, 3}, {6, 1}, {7, 1}, {7, 2}, {8, 1}});
  return s;
}

ConformalMetric::ConformalMetric(ScalarField u, Stencil stencil)
    : u_(std::move(u)), stencil_(std::move(stencil)) {
  const Grid& g = u_.grid();
  eu_.assign(g.size(), 0.0);
  for (int id = 0; id < g.size(); ++id) {
    if (!g.inside_id(id)) continue;
    double e = std::exp(u_.at_id(id));
    if (!(e > 0.0) || !std::isfinite(e))
      throw std::runtime_error("metric: conformal factor not finite/positive");
    eu_[id] = e;
  }
}

std::vector<std::pair<int, double>> ConformalMetric::link_cells(Point p) const {
  const Grid& g = u_.grid();
  std::vector<std::pair<int, double>> links;
  auto cell = g.cell_at(p);
  if (!cell) throw std::runtime_error("metric: point outside grid");
  auto [ci, cj] = *cell;
  auto up = u_.interp(p);
  for (int dj = -2; dj <= 2; ++dj)
    for (int di = -2; di <= 2; ++di) {
      int i = ci + di, j = cj + dj;
      if (!g.inside(i, j)) continue;
      int id = g.id(i, j);
      double ep = up ? std::exp(*up) : eu_[id];
      double w = dist(p, g.center(i, j)) * 0.5 * (ep + eu_[id]);
      links.emplace_back(id, w);
    }
  if (links.empty()) throw std::runtime_error("metric: point outside mask");
  return links;
}

std::vector<double> ConformalMetric::distances_from(Point src) const {
  const Grid& g = u_.grid();
  auto cell = g.cell_at(src);
  if (cell) {
    auto [i, j] = *cell;
    Point c = g.center(i, j);
    if (g.inside(i, j) && dist(c, src) < 1e-14 * g.h())
      return distances_from_cell(g.id(i, j));
  }
  std::vector<double> dist_;
  dist_.assign(g.size(), kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  for (auto [id, w] : link_cells(src)) {
    if (w < dist_[id]) {
      dist_[id] = w;
      heap.emplace(w, id);
    }
  }
  // Shared relaxation loop below.
  const int nx = g.nx(), ny = g.ny();
  const double h = g.h();
  while (!heap.empty()) {
    auto [d, id] = heap.top();
    heap.pop();
    if (d > dist_[id]) continue;
    int i = id % nx, j = id / nx;
    double ei = eu_[id];
    for (auto [di, dj] : stencil_.moves) {
      int ii = i + di, jj = j + dj;
      if (ii < 0 || ii >= nx || jj < 0 || jj >= ny) continue;
      int nid = jj * nx + ii;
      if (eu_[nid] == 0.0) continue;
      if (std::abs(di) >= 2 || std::abs(dj) >= 2) {
        // Long moves must not tunnel through the mask.
        int mi = i + di / 2, mj = j + dj / 2;
        if (!g.inside(mi, mj)) continue;
      }
      double len = h * std::sqrt(double(di * di + dj * dj));
      double nd = d + len * 0.5 * (ei + eu_[nid]);
      if (nd < dist_[nid]) {
        dist_[nid] = nd;
        heap.emplace(nd, nid);
      }
    }
  }
  return dist_;
}

std::vector<double> ConformalMetric::distances_from_cell(int src) const {
  const Grid& g = u_.grid();
  if (!g.inside_id(src))
    throw std::runtime_error("metric: source cell outside mask");
  std::vector<double> dist_;
  dist_.assign(g.size(), kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  dist_[src] = 0.0;
  heap.emplace(0.0, src);
  const int nx = g.nx(), ny = g.ny();
  const double h = g.h();
  while (!heap.empty()) {
    auto [d, id] = heap.top();
    heap.pop();
    if (d > dist_[id]) continue;
    int i = id % nx, j = id / nx;
    double ei = eu_[id];
    for (auto [di, dj] : stencil_.moves) {
      int ii = i + di, jj = j + dj;
      if (ii < 0 || ii >= nx || jj < 0 || jj >= ny) continue;
      int nid = jj * nx + ii;
      if (eu_[nid] == 0.0) continue;
      if (std::abs(di) >= 2 || std::abs(dj) >= 2) {
        int mi = i + di / 2, mj = j + dj / 2;
        if (!g.inside(mi, mj)) continue;
      }
      double len = h * std::sqrt(double(di * di + dj * dj));
      double nd = d + len * 0.5 * (ei + eu_[nid]);
      if (nd < dist_[nid]) {
        dist_[nid] = nd;
        heap.emplace(nd, nid);
      }
    }
  }
  return dist_;
}

double ConformalMetric::distance(Point x, Point y) const {
  if (x.x == y.x && x.y == y.y) return 0.0;
  std::vector<double> d = distances_from(x);
  double best = kInf;
  for (auto [id, w] : link_cells(y))
    if (d[id] + w < best) best = d[id] + w;
  if (!std::isfinite(best)) throw std::runtime_error("metric: disconnected");
  return best;
}

double ConformalMetric::curve_length(const std::vector<Point>& polyline) const {
  const Grid& g = u_.grid();
  if (polyline.size() < 2)
    throw std::invalid_argument("curve_length: need at least two vertices");
  auto factor_at = [&](Point q) {
    if (!g.cell_at(q))
      throw std::runtime_error("curve_length: vertex outside grid");
    auto uq = u_.interp(q);
    if (!uq) throw std::runtime_error("curve_length: vertex outside grid");
    return std::exp(*uq);
  };
  double total = 0.0;
  for (size_t s = 0; s + 1 < polyline.size(); ++s) {
    Point a = polyline[s], b = polyline[s + 1];
    double len = dist(a, b);
    int pieces = std::max(1, static_cast<int>(std::ceil(len / g.h())));
    Point prev = a;
    double e_prev = factor_at(prev);
    for (int k = 1; k <= pieces; ++k) {
      double t = static_cast<double>(k) / pieces;
      Point q = a + t * (b - a);
      double e_q = factor_at(q);
      total += dist(prev, q) * 0.5 * (e_prev + e_q);
      prev = q;
      e_prev = e_q;
    }
  }
  return total;
}

double ConformalMetric::area(const Region& region) const {
  const Grid& g = u_.grid();
  double sum = 0.0;
  size_t n = 0;
  for (int id = 0; id < g.size(); ++id) {
    if (!g.inside_id(id) || !region.contains(g.center_id(id))) continue;
    sum += eu_[id] * eu_[id];
    ++n;
  }
  if (n == 0) throw std::runtime_error("area: empty region");
  return sum * g.h() * g.h();
}

Region ConformalMetric::geodesic_ball(Point z, double r) const {
  const Grid& g = u_.grid();
  std::vector<double> d = distances_from(z);
  auto mask = std::make_shared<std::vector<uint8_t>>(g.size(), 0);
  for (int id = 0; id < g.size(); ++id)
    if (g.inside_id(id) && d[id] < r) (*mask)[id] = 1;
  return Region::cell_set(mask, g.nx(), g.ny(), g.x0(), g.y0(), g.h());
}

double ConformalMetric::ball_volume_ratio(Point z, double r) const {
  Region ball = geodesic_ball(z, r);
  return area(ball) / (kPi * r * r);
}

std::vector<int> ConformalMetric::farthest_point_sample(const Region& region,
                                                        int n) const {
  const Grid& g = u_.grid();
  std::vector<int> cells;
  for (int id = 0; id < g.size(); ++id)
    if (g.inside_id(id) && region.contains(g.center_id(id)))
      cells.push_back(id);
  if (cells.empty()) throw std::runtime_error("sample: empty region");
  if (n < 1) throw std::invalid_argument("sample: need n >= 1");
  if (static_cast<size_t>(n) > cells.size())
    throw std::runtime_error("sample: more landmarks than cells");

  // Selection runs in the plane geometry of the cell centers, seeded at the
  // region center: landmark sequences are deterministic and do not move
  // under perturbations of the conformal factor. The metric enters only
  // through the distance fields computed from the chosen landmarks.
  Point c = region.center_hint();
  int seed = cells[0];
  double best = kInf;
  for (int id : cells) {
    double d = dist(g.center_id(id), c);
    if (d < best) {
      best = d;
      seed = id;
    }
  }

  std::vector<int> picked{seed};
  std::vector<double> nearest(cells.size());
  for (size_t k = 0; k < cells.size(); ++k)
    nearest[k] = dist(g.center_id(cells[k]), g.center_id(seed));
  while (static_cast<int>(picked.size()) < n) {
    size_t far = 0;
    for (size_t k = 1; k < cells.size(); ++k)
      if (nearest[k] > nearest[far]) far = k;
    picked.push_back(cells[far]);
    for (size_t k = 0; k < cells.size(); ++k)
      nearest[k] = std::min(
          nearest[k], dist(g.center_id(cells[k]), g.center_id(cells[far])));
  }
  return picked;
}

double ConformalMetric::diameter(const Region& region, int landmarks,
                                 int exact_cells) const {
  const Grid& g = u_.grid();
  std::vector<int> cells;
  for (int id = 0; id < g.size(); ++id)
    if (g.inside_id(id) && region.contains(g.center_id(id)))
      cells.push_back(id);
  if (cells.empty()) throw std::runtime_error("diameter: empty region");

  if (g.size() <= exact_cells) {
    double best = 0.0;
    for (int id : cells) {
      std::vector<double> d = distances_from_cell(id);
      for (int other : cells)
        if (std::isfinite(d[other])) best = std::max(best, d[other]);
    }
    return best;
  }

  int n = std::min<size_t>(landmarks, cells.size());
  std::vector<int> picked = farthest_point_sample(region, n);
  double best = 0.0;
  for (int a : picked) {
    std::vector<double> d = distances_from_cell(a);
    for (int b : picked)
      if (std::isfinite(d[b])) best = std::max(best, d[b]);
  }
  return best;
}

std::string NeckReport::csv_row() const {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g", c, ratio_min,
                ratio_max, area_ratio, curvature_energy);
  return buf;
}

NeckReport neck_analysis(const ConformalMetric& m, int circle_samples,
                         int angle_grid) {
  NeckReport rep;

  // Arc-length mean of u on the circle of radius 3/2 (equal angles).
  double sum = 0.0;
  for (int k = 0; k < circle_samples; ++k) {
    double th = 2.0 * kPi * k / circle_samples;
    auto v = m.u().interp({1.5 * std::cos(th), 1.5 * std::sin(th)});
    if (!v) throw std::runtime_error("neck: circle leaves grid");
    sum += *v;
  }
  rep.c = sum / circle_samples;
  double ec = std::exp(rep.c);

  rep.ratio_min = kInf;
  rep.ratio_max = 0.0;
  for (int a = 0; a < angle_grid; ++a) {
    double th = 2.0 * kPi * a / angle_grid;
    Point src{std::cos(th), std::sin(th)};
    std::vector<double> d = m.distances_from(src);
    for (int b = 0; b < angle_grid; ++b) {
      double ph = 2.0 * kPi * b / angle_grid;
      Point dst{2.0 * std::cos(ph), 2.0 * std::sin(ph)};
      double best = kInf;
      for (auto [id, w] : m.link_cells(dst))
        best = std::min(best, d[id] + w);
      if (!std::isfinite(best)) throw std::runtime_error("neck: disconnected");
      double ratio = best / ec;
      rep.ratio_min = std::min(rep.ratio_min, ratio);
      rep.ratio_max = std::max(rep.ratio_max, ratio);
    }
  }

  rep.area_ratio = m.area(Region::annulus({0, 0}, 1.0, 2.0)) / (ec * ec);

  ScalarField lap_u = laplacian(m.u());
  const Grid& ig = lap_u.grid();
  Region ann = Region::annulus({0, 0}, 0.5, 4.0);
  double energy = 0.0;
  for (int id = 0; id < ig.size(); ++id)
    if (ig.inside_id(id) && ann.contains(ig.center_id(id)))
      energy += std::abs(lap_u.at_id(id));
  rep.curvature_energy = energy * ig.h() * ig.h();
  return rep;
}

}  // namespace confgeo
