#include "confgeo/gh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace confgeo {

FiniteMetricSpace::FiniteMetricSpace(std::vector<Point> labels,
                                     std::vector<std::vector<double>> dist)
    : labels_(std::move(labels)), dist_(std::move(dist)) {
  size_t n = labels_.size();
  if (n == 0) throw std::invalid_argument("metric space: empty");
  if (dist_.size() != n) throw std::invalid_argument("metric space: shape");
  double scale = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (dist_[i].size() != n)
      throw std::invalid_argument("metric space: shape");
    for (size_t j = 0; j < n; ++j) {
      if (!std::isfinite(dist_[i][j]) || dist_[i][j] < 0)
        throw std::invalid_argument("metric space: bad entry");
      scale = std::max(scale, dist_[i][j]);
    }
  }
  double tol = 1e-9 * std::max(scale, 1e-300);
  for (size_t i = 0; i < n; ++i) {
    if (std::abs(dist_[i][i]) > tol)
      throw std::invalid_argument("metric space: nonzero diagonal");
    dist_[i][i] = 0.0;
    for (size_t j = i + 1; j < n; ++j) {
      if (std::abs(dist_[i][j] - dist_[j][i]) > tol)
        throw std::invalid_argument("metric space: asymmetric");
      double s = 0.5 * (dist_[i][j] + dist_[j][i]);
      dist_[i][j] = dist_[j][i] = s;
    }
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      for (size_t k = 0; k < n; ++k)
        if (dist_[i][j] > dist_[i][k] + dist_[k][j] + tol)
          throw std::invalid_argument("metric space: triangle violation");
}

double FiniteMetricSpace::diameter() const {
  double best = 0.0;
  for (const auto& row : dist_)
    for (double d : row) best = std::max(best, d);
  return best;
}

double FiniteMetricSpace::radius() const {
  double best = kInf;
  for (const auto& row : dist_) {
    double ecc = 0.0;
    for (double d : row) ecc = std::max(ecc, d);
    best = std::min(best, ecc);
  }
  return best;
}

std::string FiniteMetricSpace::csv() const {
  std::string out = std::to_string(size()) + "\n";
  char buf[40];
  for (int i = 0; i < size(); ++i) {
    for (int j = 0; j < size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", dist_[i][j]);
      out += buf;
      out += (j + 1 == size()) ? '\n' : ',';
    }
  }
  return out;
}

FiniteMetricSpace FiniteMetricSpace::from_csv(std::istream& in,
                                              std::vector<Point> labels) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("space csv: empty");
  int n = std::stoi(line);
  if (n <= 0) throw std::runtime_error("space csv: bad size");
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw std::runtime_error("space csv: short");
    std::stringstream row(line);
    std::string tok;
    for (int j = 0; j < n; ++j) {
      if (!std::getline(row, tok, ','))
        throw std::runtime_error("space csv: short row");
      d[i][j] = std::stod(tok);
    }
  }
  if (labels.empty()) labels.assign(n, Point{});
  return FiniteMetricSpace(std::move(labels), std::move(d));
}

FiniteMetricSpace sample_space(const ConformalMetric& m, const Region& region,
                               int n) {
  std::vector<int> cells = m.farthest_point_sample(region, n);
  std::vector<Point> labels;
  for (int id : cells) labels.push_back(m.grid().center_id(id));
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (int a = 0; a < n; ++a) {
    std::vector<double> field = m.distances_from_cell(cells[a]);
    for (int b = 0; b < n; ++b) {
      if (b == a) continue;
      if (!std::isfinite(field[cells[b]]))
        throw std::runtime_error("sample_space: disconnected region");
      d[a][b] = field[cells[b]];
    }
  }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      d[a][b] = d[b][a] = 0.5 * (d[a][b] + d[b][a]);
  return FiniteMetricSpace(std::move(labels), std::move(d));
}

namespace {

// Distortion of the correspondence {(x,f(x))} ∪ {(g(y),y)}.
double pair_distortion(const FiniteMetricSpace& X, const FiniteMetricSpace& Y,
                       const std::vector<int>& f, const std::vector<int>& g) {
  int nx = X.size(), ny = Y.size();
  double dis = 0.0;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < nx; ++j)
      dis = std::max(dis, std::abs(X.d(i, j) - Y.d(f[i], f[j])));
  for (int i = 0; i < ny; ++i)
    for (int j = 0; j < ny; ++j)
      dis = std::max(dis, std::abs(X.d(g[i], g[j]) - Y.d(i, j)));
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      dis = std::max(dis, std::abs(X.d(i, g[j]) - Y.d(f[i], j)));
  return dis;
}

struct GhSearch {
  const FiniteMetricSpace& X;
  const FiniteMetricSpace& Y;
  std::vector<int> f, g;
  int nf = 0, ng = 0;
  double best;

  GhSearch(const FiniteMetricSpace& x, const FiniteMetricSpace& y, double b0)
      : X(x), Y(y), f(x.size(), -1), g(y.size(), -1), best(b0) {}

  double extend_f(int k, int y) const {
    double m = 0.0;
    for (int i = 0; i < nf; ++i)
      m = std::max(m, std::abs(X.d(k, i) - Y.d(y, f[i])));
    for (int j = 0; j < ng; ++j)
      m = std::max(m, std::abs(X.d(k, g[j]) - Y.d(y, j)));
    return m;
  }

  double extend_g(int k, int x) const {
    double m = 0.0;
    for (int j = 0; j < ng; ++j)
      m = std::max(m, std::abs(X.d(x, g[j]) - Y.d(k, j)));
    for (int i = 0; i < nf; ++i)
      m = std::max(m, std::abs(X.d(i, x) - Y.d(f[i], k)));
    return m;
  }

  void run(double cur) {
    if (cur >= best) return;
    bool take_f = nf < X.size() &&
                  (ng >= Y.size() || nf * Y.size() <= ng * X.size());
    if (!take_f && ng >= Y.size()) {
      best = cur;  // complete assignment
      return;
    }
    if (take_f) {
      int k = nf;
      for (int y = 0; y < Y.size(); ++y) {
        double m = std::max(cur, extend_f(k, y));
        if (m >= best) continue;
        f[k] = y;
        ++nf;
        run(m);
        --nf;
        f[k] = -1;
      }
    } else {
      int k = ng;
      for (int x = 0; x < X.size(); ++x) {
        double m = std::max(cur, extend_g(k, x));
        if (m >= best) continue;
        g[k] = x;
        ++ng;
        run(m);
        --ng;
        g[k] = -1;
      }
    }
  }
};

// Greedy correspondence (f,g) by incremental distortion, then single-point
// reassignment passes until no improvement.
std::pair<std::vector<int>, std::vector<int>> greedy_pair(
    const FiniteMetricSpace& X, const FiniteMetricSpace& Y) {
  int nx = X.size(), ny = Y.size();
  std::vector<int> f(nx, 0), g(ny, 0);
  GhSearch s(X, Y, kInf);
  for (int k = 0; k < nx; ++k) {
    double best_m = kInf;
    int pick = 0;
    for (int y = 0; y < ny; ++y) {
      double m = s.extend_f(k, y);
      if (m < best_m) {
        best_m = m;
        pick = y;
      }
    }
    s.f[k] = pick;
    ++s.nf;
  }
  for (int k = 0; k < ny; ++k) {
    double best_m = kInf;
    int pick = 0;
    for (int x = 0; x < nx; ++x) {
      double m = s.extend_g(k, x);
      if (m < best_m) {
        best_m = m;
        pick = x;
      }
    }
    s.g[k] = pick;
    ++s.ng;
  }
  f = s.f;
  g = s.g;

  double cur = pair_distortion(X, Y, f, g);
  for (int pass = 0; pass < 50; ++pass) {
    bool improved = false;
    for (int i = 0; i < nx; ++i) {
      int keep = f[i];
      for (int y = 0; y < ny; ++y) {
        if (y == keep) continue;
        f[i] = y;
        double m = pair_distortion(X, Y, f, g);
        if (m < cur) {
          cur = m;
          keep = y;
          improved = true;
        }
        f[i] = keep;
      }
    }
    for (int j = 0; j < ny; ++j) {
      int keep = g[j];
      for (int x = 0; x < nx; ++x) {
        if (x == keep) continue;
        g[j] = x;
        double m = pair_distortion(X, Y, f, g);
        if (m < cur) {
          cur = m;
          keep = x;
          improved = true;
        }
        g[j] = keep;
      }
    }
    if (!improved) break;
  }
  return {f, g};
}

}  // namespace

double gh_exact(const FiniteMetricSpace& X, const FiniteMetricSpace& Y) {
  if (X.size() > 7 || Y.size() > 7)
    throw std::invalid_argument(
        "gh_exact: sizes above 7 are not searched exhaustively; use gh_bounds");
  auto [f0, g0] = greedy_pair(X, Y);
  double upper = pair_distortion(X, Y, f0, g0);
  GhSearch s(X, Y, std::nextafter(upper, kInf));
  s.run(0.0);
  return 0.5 * std::min(s.best, upper);
}

namespace {

// Refine (f,g) by single-point reassignments until no improvement.
double local_swaps(const FiniteMetricSpace& X, const FiniteMetricSpace& Y,
                   std::vector<int>& f, std::vector<int>& g) {
  int nx = X.size(), ny = Y.size();
  double cur = pair_distortion(X, Y, f, g);
  for (int pass = 0; pass < 50; ++pass) {
    bool improved = false;
    for (int i = 0; i < nx; ++i) {
      int keep = f[i];
      for (int y = 0; y < ny; ++y) {
        if (y == keep) continue;
        f[i] = y;
        double m = pair_distortion(X, Y, f, g);
        if (m < cur) {
          cur = m;
          keep = y;
          improved = true;
        }
        f[i] = keep;
      }
    }
    for (int j = 0; j < ny; ++j) {
      int keep = g[j];
      for (int x = 0; x < nx; ++x) {
        if (x == keep) continue;
        g[j] = x;
        double m = pair_distortion(X, Y, f, g);
        if (m < cur) {
          cur = m;
          keep = x;
          improved = true;
        }
        g[j] = keep;
      }
    }
    if (!improved) break;
  }
  return cur;
}

}  // namespace

GhBounds gh_bounds(const FiniteMetricSpace& X, const FiniteMetricSpace& Y) {
  GhBounds b;
  b.lower = 0.5 * std::max(std::abs(X.diameter() - Y.diameter()),
                           std::abs(X.radius() - Y.radius()));
  auto [f, g] = greedy_pair(X, Y);
  double best = pair_distortion(X, Y, f, g);

  // Second start: match by point labels when both spaces carry them. For
  // samplings of nearby metrics this is close to the natural correspondence.
  auto has_labels = [](const FiniteMetricSpace& s) {
    for (const Point& p : s.labels())
      if (p.x != 0.0 || p.y != 0.0) return true;
    return false;
  };
  if (has_labels(X) && has_labels(Y)) {
    std::vector<int> f2(X.size()), g2(Y.size());
    for (int i = 0; i < X.size(); ++i) {
      double bd = kInf;
      for (int j = 0; j < Y.size(); ++j) {
        double d = dist(X.labels()[i], Y.labels()[j]);
        if (d < bd) {
          bd = d;
          f2[i] = j;
        }
      }
    }
    for (int j = 0; j < Y.size(); ++j) {
      double bd = kInf;
      for (int i = 0; i < X.size(); ++i) {
        double d = dist(X.labels()[i], Y.labels()[j]);
        if (d < bd) {
          bd = d;
          g2[j] = i;
        }
      }
    }
    double cand = local_swaps(X, Y, f2, g2);
    if (cand < best) best = cand;
  }
  b.upper = 0.5 * best;
  if (b.lower > b.upper) b.lower = b.upper;
  return b;
}

}  // namespace confgeo
