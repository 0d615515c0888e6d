#include "confgeo/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>

#include "confgeo/norms.hpp"
#include "confgeo/pde.hpp"

namespace confgeo {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

MetricFamily::MetricFamily(int k_min, int k_max, FamilyKind kind,
                           std::function<ConformalMetric(int)> gen)
    : k_min_(k_min), k_max_(k_max), kind_(kind), gen_(std::move(gen)) {
  if (k_max_ < k_min_) throw std::invalid_argument("family: empty index range");
}

const ConformalMetric& MetricFamily::member(int k) const {
  if (k < k_min_ || k > k_max_)
    throw std::out_of_range("family: index outside range");
  auto it = cache_.find(k);
  if (it == cache_.end()) it = cache_.emplace(k, gen_(k)).first;
  return it->second;
}

MetricFamily gen_collapse_family(int k_min, int k_max, int res) {
  if (k_min < 0) throw std::invalid_argument("collapse family: k >= 0");
  auto grid = Grid::disk({0, 0}, 1.0, res);
  return MetricFamily(k_min, k_max, FamilyKind::Collapse,
                      [grid](int k) {
                        ScalarField e2kx = ScalarField::sample(
                            grid, [k](Point p) { return std::exp(2.0 * k * p.x); });
                        double ak2 = integrate(e2kx, Region::everywhere());
                        double log_a = 0.5 * std::log(ak2);
                        ScalarField u = ScalarField::sample(
                            grid,
                            [k, log_a](Point p) { return k * p.x - log_a; });
                        return ConformalMetric(std::move(u));
                      });
}

ScalarField bubble_profile(std::shared_ptr<const Grid> grid, Point p,
                           double s) {
  if (!(s > 0)) throw std::invalid_argument("bubble: scale must be positive");
  return ScalarField::sample(grid, [p, s](Point x) {
    double r2 = dot(x - p, x - p);
    return -std::log1p(r2 / (4.0 * s * s)) - std::log(s);
  });
}

ScalarField multi_bubble(std::shared_ptr<const Grid> grid,
                         const std::vector<std::pair<Point, double>>& bubbles) {
  if (bubbles.empty()) throw std::invalid_argument("bubble: none given");
  // Potentials add, so the curvature density is exactly the sum of the
  // single-bubble densities and each separated bubble keeps mass near 4 pi.
  return ScalarField::sample(grid, [&](Point x) {
    double u = 0.0;
    for (auto [p, s] : bubbles) {
      double r2 = dot(x - p, x - p);
      u += -std::log1p(r2 / (4.0 * s * s)) - std::log(s);
    }
    return u;
  });
}

MetricFamily gen_bubble_family(const std::vector<double>& scales, Point center,
                               int res, double box_half) {
  if (scales.empty()) throw std::invalid_argument("bubble family: no scales");
  auto grid = Grid::square(box_half, res);
  auto scales_copy = scales;
  return MetricFamily(
      0, static_cast<int>(scales.size()) - 1, FamilyKind::Bubble,
      [grid, center, scales_copy](int k) {
        return ConformalMetric(bubble_profile(grid, center, scales_copy[k]));
      });
}

double round_chart_factor(Point x) {
  return -std::log1p(0.25 * dot(x, x));
}

MetricFamily gen_mobius_family(const std::vector<double>& scales, Point x_star,
                               int res, double box_half) {
  if (scales.empty()) throw std::invalid_argument("mobius family: no scales");
  auto grid = Grid::square(box_half, res);
  auto scales_copy = scales;
  return MetricFamily(
      0, static_cast<int>(scales.size()) - 1, FamilyKind::Mobius,
      [grid, x_star, scales_copy](int k) {
        double r = scales_copy[k];
        ScalarField u = ScalarField::sample(grid, [x_star, r](Point x) {
          return round_chart_factor((1.0 / r) * (x - x_star)) - std::log(r);
        });
        return ConformalMetric(std::move(u));
      });
}

MetricFamily gen_neck_family(int members, double size, int res) {
  if (members < 1) throw std::invalid_argument("neck family: empty");
  auto grid = Grid::annulus(0.25, 4.0, res);
  return MetricFamily(
      0, members - 1, FamilyKind::Neck, [grid, size](int j) {
        if (j == 0 || size == 0.0)
          return ConformalMetric(ScalarField(grid, 0.0));
        std::mt19937 rng(1234u + static_cast<unsigned>(j));
        std::uniform_real_distribution<double> coef(-1.0, 1.0);
        double alpha = coef(rng);
        double a1 = coef(rng), p1 = kPi * coef(rng);
        double a2 = coef(rng), p2 = kPi * coef(rng);
        double b1 = coef(rng), q1 = kPi * coef(rng);
        ScalarField u = ScalarField::sample(grid, [=](Point x) {
          double r = norm(x), th = std::atan2(x.y, x.x);
          double v = alpha * std::log(r);
          v += a1 * (r / 4.0) * std::cos(th + p1);
          v += a2 * (r / 4.0) * (r / 4.0) * std::cos(2.0 * th + p2);
          v += b1 * (0.25 / r) * std::cos(th + q1);
          return size * v;
        });
        return ConformalMetric(std::move(u));
      });
}

MetricFamily gen_sphere_k1_family(int members, int res, double box_half) {
  auto grid = Grid::square(box_half, res);
  const std::vector<double> rs = {1.0, 0.8, 1.25, 0.9};
  const std::vector<Point> as = {{0, 0}, {0.3, 0.2}, {-0.4, 0.1}, {0.2, -0.35}};
  const std::vector<double> cs = {1.0, 1.05, 1.1, 1.02};
  if (members < 1 || members > static_cast<int>(rs.size()))
    throw std::invalid_argument("sphere family: 1..4 members");
  return MetricFamily(
      0, members - 1, FamilyKind::Sphere, [grid, rs, as, cs](int j) {
        double r = rs[j], c = cs[j];
        Point a = as[j];
        ScalarField u = ScalarField::sample(grid, [r, c, a](Point y) {
          return round_chart_factor(a + r * y) + std::log(r) - std::log(c);
        });
        return ConformalMetric(std::move(u));
      });
}

// ---------------------------------------------------------------------------
// Concentration machinery

namespace {

struct MassMap {
  std::shared_ptr<const Grid> grid;           // eroded grid of u
  std::vector<double> cell_mass;              // |lap u| h^2 per interior cell
  std::vector<std::pair<Point, double>> excluded;

  explicit MassMap(const ConformalMetric& m) {
    ScalarField lap_u = laplacian(m.u());
    grid = lap_u.grid_ptr();
    cell_mass.assign(grid->size(), 0.0);
    double h2 = grid->h() * grid->h();
    for (int id = 0; id < grid->size(); ++id)
      if (grid->inside_id(id))
        cell_mass[id] = std::abs(lap_u.at_id(id)) * h2;
  }

  bool is_excluded(Point p) const {
    for (const auto& [c, r] : excluded)
      if (dist(p, c) < r) return true;
    return false;
  }

  double total_remaining() const {
    double t = 0.0;
    for (int id = 0; id < grid->size(); ++id) {
      if (cell_mass[id] == 0.0) continue;
      if (!is_excluded(grid->center_id(id))) t += cell_mass[id];
    }
    return t;
  }

  double box_distance(Point x) const {
    double x1 = grid->x0() + grid->nx() * grid->h();
    double y1 = grid->y0() + grid->ny() * grid->h();
    return std::min(std::min(x.x - grid->x0(), x1 - x.x),
                    std::min(x.y - grid->y0(), y1 - x.y));
  }

  // Radius at which the accumulated mass around x reaches `target`, scanning
  // cells out to `cap`. Returns +inf when the mass inside the cap stays
  // below target. With interpolate set, the crossing is placed linearly
  // inside the last radius step, which averages out the half-ring
  // staircase of the cell measure.
  double crossing_radius(Point x, double target, double cap,
                         bool interpolate = false) const {
    const Grid& g = *grid;
    int ci = static_cast<int>((x.x - g.x0()) / g.h());
    int cj = static_cast<int>((x.y - g.y0()) / g.h());
    int w = static_cast<int>(cap / g.h()) + 2;
    std::vector<std::pair<double, double>> items;  // (dist2, mass)
    double cap2 = cap * cap;
    for (int j = std::max(0, cj - w); j <= std::min(g.ny() - 1, cj + w); ++j)
      for (int i = std::max(0, ci - w); i <= std::min(g.nx() - 1, ci + w);
           ++i) {
        int id = g.id(i, j);
        if (cell_mass[id] == 0.0) continue;
        Point c = g.center(i, j);
        double d2 = dot(c - x, c - x);
        if (d2 >= cap2) continue;
        if (is_excluded(c)) continue;
        items.emplace_back(d2, cell_mass[id]);
      }
    std::sort(items.begin(), items.end());
    double cum = 0.0, prev_r = 0.0;
    for (auto& [d2, mass] : items) {
      double r = std::sqrt(d2);
      if (cum + mass >= target) {
        if (!interpolate) return r;
        double f = (target - cum) / mass;
        return prev_r + f * (r - prev_r);
      }
      cum += mass;
      prev_r = r;
    }
    return kInf;
  }

  // Scale of a spherical concentration at `center`: the mass profile of the
  // canonical bubble is M(t) = 4 pi t^2 / (t^2 + 4 s^2), so each crossing of
  // a mass fraction inverts to an s estimate; their mean averages the
  // staircase noise of single readings. Empty when the profile never
  // reaches the probed fractions inside the cap.
  std::optional<double> estimate_scale(Point center, double cap) const {
    static const double fractions[] = {0.3, 0.4, 0.5, 0.6, 0.7};
    double sum = 0.0;
    int found = 0;
    for (double f : fractions) {
      double t = crossing_radius(center, f * 4.0 * kPi, cap, true);
      if (!std::isfinite(t)) continue;
      sum += 0.5 * t * std::sqrt((1.0 - f) / f);
      ++found;
    }
    if (found < 3) return std::nullopt;
    return sum / found;
  }

  Point refine_center(Point x, double radius) const {
    const Grid& g = *grid;
    Point c = x;
    for (int it = 0; it < 3; ++it) {
      double sx = 0, sy = 0, sm = 0;
      int ci = static_cast<int>((c.x - g.x0()) / g.h());
      int cj = static_cast<int>((c.y - g.y0()) / g.h());
      int w = static_cast<int>(2.0 * radius / g.h()) + 2;
      double r2 = 4.0 * radius * radius;
      for (int j = std::max(0, cj - w); j <= std::min(g.ny() - 1, cj + w); ++j)
        for (int i = std::max(0, ci - w); i <= std::min(g.nx() - 1, ci + w);
             ++i) {
          int id = g.id(i, j);
          if (cell_mass[id] == 0.0) continue;
          Point p = g.center(i, j);
          if (dot(p - c, p - c) >= r2 || is_excluded(p)) continue;
          sx += p.x * cell_mass[id];
          sy += p.y * cell_mass[id];
          sm += cell_mass[id];
        }
      if (sm <= 0) return c;
      c = {sx / sm, sy / sm};
    }
    return c;
  }

  // Minimizer of the mass-crossing radius over high-density cells and a
  // coarse lattice. Returns (center, radius); radius +inf when nothing
  // concentrates.
  std::pair<Point, double> minimize_crossing(double target) const {
    const Grid& g = *grid;
    std::vector<int> cand;
    std::vector<int> by_mass;
    for (int id = 0; id < g.size(); ++id)
      if (cell_mass[id] > 0.0 && !is_excluded(g.center_id(id)))
        by_mass.push_back(id);
    std::sort(by_mass.begin(), by_mass.end(), [&](int a, int b) {
      if (cell_mass[a] != cell_mass[b]) return cell_mass[a] > cell_mass[b];
      return a < b;
    });
    if (by_mass.size() > 512) by_mass.resize(512);
    cand = by_mass;
    int step = std::max(1, std::min(g.nx(), g.ny()) / 32);
    for (int j = step / 2; j < g.ny(); j += step)
      for (int i = step / 2; i < g.nx(); i += step) {
        int id = g.id(i, j);
        if (g.inside_id(id) && !is_excluded(g.center_id(id)))
          cand.push_back(id);
      }

    double r_best = kInf;
    Point x_best{};
    bool found = false;
    for (int id : cand) {
      Point x = g.center_id(id);
      double cap = std::min(r_best, box_distance(x));
      if (!(cap > 0)) continue;
      double r = crossing_radius(x, target, cap);
      if (r < r_best) {
        r_best = r;
        x_best = x;
        found = true;
      }
    }
    if (!found) return {Point{}, kInf};
    return {x_best, r_best};
  }
};

}  // namespace

double bubble_mass_radius_factor(double eps) {
  if (!(eps > 0 && eps < 8 * kPi))
    throw std::invalid_argument("mass radius factor: eps outside (0, 8pi)");
  return 2.0 * std::sqrt(eps / (8.0 * kPi - eps));
}

double concentration_radius(const ConformalMetric& m, Point x, double eps,
                            const RadiusLadder& ladder) {
  if (!(eps > 0)) throw std::invalid_argument("concentration: eps <= 0");
  MassMap mass(m);
  double cap = mass.box_distance(x);
  if (!(cap > 0)) throw std::invalid_argument("concentration: x outside grid");
  double cross = mass.crossing_radius(x, 0.5 * eps, cap);
  if (!std::isfinite(cross)) return cap;
  double r_min = ladder.min_factor * m.grid().h();
  if (cross < r_min) return 0.0;
  double t = r_min;
  while (t * ladder.ratio <= cross) t *= ladder.ratio;
  return t;
}

std::vector<BlowupRecord> extract_bubble(const MetricFamily& family,
                                         double eps, int rescale_res) {
  if (!(eps > 0)) throw std::invalid_argument("extract: eps <= 0");
  std::vector<BlowupRecord> records;
  double tau = bubble_mass_radius_factor(eps);
  for (int k = family.k_min(); k <= family.k_max(); ++k) {
    const ConformalMetric& m = family.member(k);
    MassMap mass(m);
    double total = mass.total_remaining();
    int max_records =
        static_cast<int>(std::ceil(total / (0.5 * eps))) + 1;
    int emitted = 0;
    while (emitted < max_records) {
      double remaining = mass.total_remaining();
      if (remaining < 0.5 * eps) break;
      auto [x0, r0] = mass.minimize_crossing(0.5 * eps);
      if (!std::isfinite(r0)) break;  // nothing concentrates below the cap
      Point center = mass.refine_center(x0, std::max(r0, 2 * m.grid().h()));
      double cap = mass.box_distance(center);
      double r_raw = mass.crossing_radius(center, 0.5 * eps, cap, true);
      if (!std::isfinite(r_raw)) r_raw = r0;
      double scale = r_raw / tau;
      if (auto est = mass.estimate_scale(center, cap)) {
        center = mass.refine_center(center, 1.5 * *est);
        est = mass.estimate_scale(center, mass.box_distance(center));
        if (est) scale = *est;
      }

      BlowupRecord rec(
          rescale_blowup(m.u(), center, scale, true, 4.0, rescale_res));
      rec.k = k;
      rec.center = center;
      rec.scale = scale;
      rec.shift = std::log(scale);
      rec.mass = 0.5 * eps;

      // Verdict: curvature mass in the rescaled window separates spherical
      // concentration from the linear (collapse) picture.
      ScalarField lap_r = laplacian(rec.rescaled);
      double wmass = 0.0;
      const Grid& rg = lap_r.grid();
      Region d2 = Region::disk({0, 0}, 2.0);
      for (int id = 0; id < rg.size(); ++id)
        if (rg.inside_id(id) && d2.contains(rg.center_id(id)))
          wmass += std::abs(lap_r.at_id(id));
      wmass *= rg.h() * rg.h();
      if (wmass >= 0.25 * eps) {
        rec.verdict = BlowupRecord::Verdict::Bubble;
      } else {
        LinearFit fit = linear_blowup_check(rec);
        rec.verdict = fit.nontrivial ? BlowupRecord::Verdict::Collapse
                                     : BlowupRecord::Verdict::Converged;
      }
      records.push_back(std::move(rec));
      ++emitted;
      mass.excluded.emplace_back(center, std::min(18.0 * scale, cap));
    }
  }
  return records;
}

AtomSet detect_atoms(const MetricFamily& family, double threshold,
                     double detect_radius_cells, double mass_radius_cells) {
  if (!(threshold > 0)) throw std::invalid_argument("atoms: threshold <= 0");
  const ConformalMetric& m = family.member(family.k_max());
  MassMap mass(m);
  const Grid& g = *mass.grid;
  double t_det = detect_radius_cells * g.h();
  double t_mass = mass_radius_cells * g.h();

  // Windowed mass per cell.
  std::vector<uint8_t> hot(g.size(), 0);
  int w = static_cast<int>(t_det / g.h()) + 2;
  double t2 = t_det * t_det;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!g.inside(i, j)) continue;
      Point c = g.center(i, j);
      double acc = 0.0;
      for (int jj = std::max(0, j - w); jj <= std::min(g.ny() - 1, j + w);
           ++jj)
        for (int ii = std::max(0, i - w); ii <= std::min(g.nx() - 1, i + w);
             ++ii) {
          int id = g.id(ii, jj);
          if (mass.cell_mass[id] == 0.0) continue;
          Point p = g.center(ii, jj);
          if (dot(p - c, p - c) < t2) acc += mass.cell_mass[id];
        }
      if (acc > threshold) hot[g.id(i, j)] = 1;
    }

  // Cluster hot cells (8-connectivity) into atoms.
  AtomSet out;
  std::vector<uint8_t> seen(g.size(), 0);
  for (int start = 0; start < g.size(); ++start) {
    if (!hot[start] || seen[start]) continue;
    std::vector<int> stack{start}, cluster;
    seen[start] = 1;
    while (!stack.empty()) {
      int id = stack.back();
      stack.pop_back();
      cluster.push_back(id);
      int i = id % g.nx(), j = id / g.nx();
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
          int ii = i + di, jj = j + dj;
          if (ii < 0 || ii >= g.nx() || jj < 0 || jj >= g.ny()) continue;
          int nid = g.id(ii, jj);
          if (hot[nid] && !seen[nid]) {
            seen[nid] = 1;
            stack.push_back(nid);
          }
        }
    }
    double sx = 0, sy = 0, sm = 0;
    for (int id : cluster) {
      Point p = g.center_id(id);
      double wgt = std::max(mass.cell_mass[id], 1e-300);
      sx += p.x * wgt;
      sy += p.y * wgt;
      sm += wgt;
    }
    Atom atom;
    atom.location = {sx / sm, sy / sm};
    atom.radius = t_mass;
    double cap = std::min(t_mass * 1.0001, mass.box_distance(atom.location));
    // Mass inside the measurement radius.
    double acc = 0.0;
    int ci = static_cast<int>((atom.location.x - g.x0()) / g.h());
    int cj = static_cast<int>((atom.location.y - g.y0()) / g.h());
    int ww = static_cast<int>(cap / g.h()) + 2;
    double c2 = cap * cap;
    for (int jj = std::max(0, cj - ww); jj <= std::min(g.ny() - 1, cj + ww);
         ++jj)
      for (int ii = std::max(0, ci - ww); ii <= std::min(g.nx() - 1, ci + ww);
           ++ii) {
        int id = g.id(ii, jj);
        if (mass.cell_mass[id] == 0.0) continue;
        Point p = g.center(ii, jj);
        if (dot(p - atom.location, p - atom.location) < c2)
          acc += mass.cell_mass[id];
      }
    atom.mass = acc;
    out.atoms.push_back(atom);
  }
  std::sort(out.atoms.begin(), out.atoms.end(),
            [](const Atom& a, const Atom& b) { return a.mass > b.mass; });
  return out;
}

std::vector<CollapseRow> classify_collapse(const MetricFamily& family,
                                           double r, int diam_landmarks) {
  Region quarter = Region::disk({0, 0}, 0.25);
  std::vector<CollapseRow> rows;
  for (int k = family.k_min(); k <= family.k_max(); ++k) {
    const ConformalMetric& m = family.member(k);
    const Grid& g = m.grid();
    double sum = 0.0;
    size_t n = 0;
    for (int id = 0; id < g.size(); ++id) {
      if (!g.inside_id(id) || !quarter.contains(g.center_id(id))) continue;
      sum += m.u().at_id(id);
      ++n;
    }
    if (n == 0) throw std::runtime_error("classify: D_{1/4} misses the grid");
    CollapseRow row;
    row.k = k;
    row.c_k = sum / n;
    rows.push_back(row);
  }

  // Last quartile of the index range, never fewer than three members (a
  // two-member tail cannot distinguish a unit-rate drift from a bounded one).
  size_t count = rows.size();
  size_t tail = std::min(count, std::max<size_t>(3, (count + 3) / 4));
  double lo = kInf, hi = -kInf;
  for (size_t i = count - tail; i < count; ++i) {
    lo = std::min(lo, rows[i].c_k);
    hi = std::max(hi, rows[i].c_k);
  }
  char verdict = (hi - lo) <= 1.0 ? 'a' : 'b';
  Region disk_r = Region::disk({0, 0}, r);
  for (auto& row : rows) {
    row.verdict = verdict;
    if (verdict == 'b') {
      const ConformalMetric& m = family.member(row.k);
      row.area_r = m.area(disk_r);
      row.diam_r = m.diameter(disk_r, diam_landmarks);
    }
  }
  return rows;
}

double jn_floor(const ConformalMetric& m, double lambda, const Region& omega) {
  double best = kInf;
  for (int j = 0; j < 17; ++j)
    for (int i = 0; i < 17; ++i) {
      Point x{-0.5 + i / 16.0, -0.5 + j / 16.0};
      if (norm(x) > 0.5 + 1e-12) continue;
      best = std::min(best, jn_radius(m.u(), x, omega, lambda));
    }
  return best;
}

LinearFit linear_blowup_check(const BlowupRecord& rec) {
  const Grid& g = rec.rescaled.grid();
  Region d2 = Region::disk({0, 0}, 2.0);
  // Normal equations for u ~ a x + b y + c.
  double sxx = 0, sxy = 0, sx = 0, syy = 0, sy = 0, s1 = 0;
  double bx = 0, by = 0, b1 = 0;
  for (int id = 0; id < g.size(); ++id) {
    if (!g.inside_id(id) || !d2.contains(g.center_id(id))) continue;
    Point p = g.center_id(id);
    double u = rec.rescaled.at_id(id);
    sxx += p.x * p.x;
    sxy += p.x * p.y;
    sx += p.x;
    syy += p.y * p.y;
    sy += p.y;
    s1 += 1;
    bx += p.x * u;
    by += p.y * u;
    b1 += u;
  }
  if (s1 == 0) throw std::runtime_error("linear fit: empty window");
  // Solve the 3x3 system by Cramer's rule.
  double A[3][3] = {{sxx, sxy, sx}, {sxy, syy, sy}, {sx, sy, s1}};
  double rhs[3] = {bx, by, b1};
  auto det3 = [](double m[3][3]) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  double det = det3(A);
  if (std::abs(det) < 1e-300) throw std::runtime_error("linear fit: singular");
  LinearFit fit;
  double sol[3];
  for (int c = 0; c < 3; ++c) {
    double M[3][3];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) M[i][j] = (j == c) ? rhs[i] : A[i][j];
    sol[c] = det3(M) / det;
  }
  fit.a = sol[0];
  fit.b = sol[1];
  fit.c = sol[2];
  double dev = 0.0;
  for (int id = 0; id < g.size(); ++id) {
    if (!g.inside_id(id) || !d2.contains(g.center_id(id))) continue;
    Point p = g.center_id(id);
    dev += std::abs(rec.rescaled.at_id(id) - fit.a * p.x - fit.b * p.y - fit.c);
  }
  fit.residual = dev * g.h() * g.h();
  fit.nontrivial = std::hypot(fit.a, fit.b) > 1e-3;
  return fit;
}

MobiusResult mobius_renormalize(const ConformalMetric& m, double eps,
                                double window_half, int window_res) {
  MassMap mass(m);
  double total = mass.total_remaining();
  auto identity = [&]() {
    MobiusResult out(
        rescale_blowup(m.u(), {0, 0}, 1.0, true, window_half, window_res));
    out.found = false;
    out.center = {0, 0};
    out.scale = 1.0;
    return out;
  };
  if (total < 0.5 * eps) return identity();
  auto [x0, r0] = mass.minimize_crossing(0.5 * eps);
  if (!std::isfinite(r0)) return identity();
  Point center = mass.refine_center(x0, std::max(r0, 2 * m.grid().h()));
  double cap = mass.box_distance(center);
  double r_raw = mass.crossing_radius(center, 0.5 * eps, cap, true);
  if (!std::isfinite(r_raw)) r_raw = r0;
  double scale = r_raw / bubble_mass_radius_factor(eps);
  if (auto est = mass.estimate_scale(center, cap)) {
    center = mass.refine_center(center, 1.5 * *est);
    est = mass.estimate_scale(center, mass.box_distance(center));
    if (est) scale = *est;
  }
  MobiusResult out(
      rescale_blowup(m.u(), center, scale, true, window_half, window_res));
  out.found = true;
  out.center = center;
  out.scale = scale;
  return out;
}

}  // namespace confgeo
