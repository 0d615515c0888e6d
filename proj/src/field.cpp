#include "confgeo/field.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace confgeo {

// ---------------------------------------------------------------------------
// Region

Region Region::disk(Point center, double radius) {
  Region r;
  r.kind_ = Kind::Disk;
  r.center_ = center;
  r.r0_ = radius;
  return r;
}

Region Region::annulus(Point center, double r_in, double r_out) {
  Region r;
  r.kind_ = Kind::Annulus;
  r.center_ = center;
  r.r0_ = r_in;
  r.r1_ = r_out;
  return r;
}

Region Region::rect(double x0, double y0, double x1, double y1) {
  Region r;
  r.kind_ = Kind::Rect;
  r.x0_ = x0;
  r.y0_ = y0;
  r.x1_ = x1;
  r.y1_ = y1;
  r.center_ = {0.5 * (x0 + x1), 0.5 * (y0 + y1)};
  return r;
}

Region Region::everywhere() { return Region{}; }

Region Region::cell_set(std::shared_ptr<const std::vector<uint8_t>> mask,
                        int nx, int ny, double x0, double y0, double h) {
  Region r;
  r.kind_ = Kind::CellSet;
  r.cells_ = std::move(mask);
  r.nx_ = nx;
  r.ny_ = ny;
  r.cx0_ = x0;
  r.cy0_ = y0;
  r.h_ = h;
  double sx = 0, sy = 0;
  size_t n = 0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if ((*r.cells_)[static_cast<size_t>(j) * nx + i]) {
        sx += x0 + (i + 0.5) * h;
        sy += y0 + (j + 0.5) * h;
        ++n;
      }
  if (n > 0) r.center_ = {sx / n, sy / n};
  return r;
}

bool Region::contains(Point p) const {
  switch (kind_) {
    case Kind::Disk:
      return dist(p, center_) < r0_;
    case Kind::Annulus: {
      double d = dist(p, center_);
      return d > r0_ && d < r1_;
    }
    case Kind::Rect:
      return p.x >= x0_ && p.x <= x1_ && p.y >= y0_ && p.y <= y1_;
    case Kind::Everywhere:
      return true;
    case Kind::CellSet: {
      int i = static_cast<int>(std::floor((p.x - cx0_) / h_));
      int j = static_cast<int>(std::floor((p.y - cy0_) / h_));
      if (i < 0 || i >= nx_ || j < 0 || j >= ny_) return false;
      return (*cells_)[static_cast<size_t>(j) * nx_ + i] != 0;
    }
  }
  return false;
}

double Region::boundary_distance(Point p) const {
  switch (kind_) {
    case Kind::Disk:
      return r0_ - dist(p, center_);
    case Kind::Annulus: {
      double d = dist(p, center_);
      return std::min(d - r0_, r1_ - d);
    }
    case Kind::Rect:
      return std::min(std::min(p.x - x0_, x1_ - p.x),
                      std::min(p.y - y0_, y1_ - p.y));
    default:
      return std::numeric_limits<double>::quiet_NaN();
  }
}

std::string Region::describe() const {
  char buf[128];
  switch (kind_) {
    case Kind::Disk:
      std::snprintf(buf, sizeof buf, "disk(%g;%g;r=%g)", center_.x, center_.y,
                    r0_);
      return buf;
    case Kind::Annulus:
      std::snprintf(buf, sizeof buf, "annulus(%g;%g)", r0_, r1_);
      return buf;
    case Kind::Rect:
      std::snprintf(buf, sizeof buf, "rect(%g;%g;%g;%g)", x0_, y0_, x1_, y1_);
      return buf;
    case Kind::Everywhere:
      return "everywhere";
    case Kind::CellSet:
      return "cells";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Grid

Grid::Grid(int nx, int ny, double x0, double y0, double h,
           std::vector<uint8_t> inside)
    : nx_(nx), ny_(ny), x0_(x0), y0_(y0), h_(h), inside_(std::move(inside)) {
  if (nx_ <= 0 || ny_ <= 0) throw std::invalid_argument("grid: empty axis");
  if (!(h_ > 0)) throw std::invalid_argument("grid: spacing must be positive");
  if (inside_.size() != static_cast<size_t>(nx_) * ny_)
    throw std::invalid_argument("grid: mask size mismatch");
  if (inside_count() == 0) throw std::invalid_argument("grid: empty mask");
}

std::shared_ptr<const Grid> Grid::rect(int nx, int ny, double x0, double y0,
                                       double h) {
  return std::make_shared<Grid>(
      nx, ny, x0, y0, h, std::vector<uint8_t>(static_cast<size_t>(nx) * ny, 1));
}

std::shared_ptr<const Grid> Grid::square(double half, int res) {
  return rect(res, res, -half, -half, 2.0 * half / res);
}

std::shared_ptr<const Grid> Grid::box_masked(double x0, double y0, double x1,
                                             double y1, int nx,
                                             const Region& region) {
  double h = (x1 - x0) / nx;
  int ny = static_cast<int>(std::lround((y1 - y0) / h));
  std::vector<uint8_t> mask(static_cast<size_t>(nx) * ny, 0);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      Point c{x0 + (i + 0.5) * h, y0 + (j + 0.5) * h};
      mask[static_cast<size_t>(j) * nx + i] = region.contains(c) ? 1 : 0;
    }
  auto g = std::make_shared<Grid>(nx, ny, x0, y0, h, std::move(mask));
  if (!g->inside_connected())
    throw std::invalid_argument("grid: mask not connected");
  return g;
}

std::shared_ptr<const Grid> Grid::disk(Point center, double radius, int res) {
  return box_masked(center.x - radius, center.y - radius, center.x + radius,
                    center.y + radius, res,
                    Region::disk(center, radius));
}

std::shared_ptr<const Grid> Grid::annulus(double r_in, double r_out, int res) {
  return box_masked(-r_out, -r_out, r_out, r_out, res,
                    Region::annulus({0, 0}, r_in, r_out));
}

std::optional<std::pair<int, int>> Grid::cell_at(Point p) const {
  int i = static_cast<int>(std::floor((p.x - x0_) / h_));
  int j = static_cast<int>(std::floor((p.y - y0_) / h_));
  if (!in_range(i, j)) return std::nullopt;
  return std::make_pair(i, j);
}

size_t Grid::inside_count() const {
  size_t n = 0;
  for (uint8_t m : inside_) n += m != 0;
  return n;
}

bool Grid::inside_connected() const {
  int start = -1;
  for (int id = 0; id < size(); ++id)
    if (inside_[id]) {
      start = id;
      break;
    }
  if (start < 0) return false;
  std::vector<uint8_t> seen(inside_.size(), 0);
  std::queue<int> q;
  q.push(start);
  seen[start] = 1;
  size_t reached = 0;
  while (!q.empty()) {
    int id = q.front();
    q.pop();
    ++reached;
    int i = id % nx_, j = id / nx_;
    const int di[4] = {1, -1, 0, 0};
    const int dj[4] = {0, 0, 1, -1};
    for (int d = 0; d < 4; ++d) {
      int ii = i + di[d], jj = j + dj[d];
      if (!inside(ii, jj)) continue;
      int nid = this->id(ii, jj);
      if (!seen[nid]) {
        seen[nid] = 1;
        q.push(nid);
      }
    }
  }
  return reached == inside_count();
}

bool Grid::interior(int i, int j) const {
  return inside(i, j) && inside(i + 1, j) && inside(i - 1, j) &&
         inside(i, j + 1) && inside(i, j - 1);
}

std::shared_ptr<const Grid> Grid::eroded() const {
  std::vector<uint8_t> mask(inside_.size(), 0);
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i)
      mask[id(i, j)] = interior(i, j) ? 1 : 0;
  return std::make_shared<Grid>(nx_, ny_, x0_, y0_, h_, std::move(mask));
}

// ---------------------------------------------------------------------------
// ScalarField

ScalarField::ScalarField(std::shared_ptr<const Grid> grid, double fill)
    : grid_(std::move(grid)),
      v_(grid_->size(), std::numeric_limits<double>::quiet_NaN()) {
  for (int id = 0; id < grid_->size(); ++id)
    if (grid_->inside_id(id)) v_[id] = fill;
}

ScalarField ScalarField::sample(std::shared_ptr<const Grid> grid,
                                const std::function<double(Point)>& f) {
  ScalarField out(grid);
  for (int id = 0; id < out.grid_->size(); ++id)
    if (out.grid_->inside_id(id)) out.v_[id] = f(out.grid_->center_id(id));
  out.check_finite();
  return out;
}

std::optional<double> ScalarField::interp(Point p) const {
  const Grid& g = *grid_;
  // Continuous index relative to cell centers, clamped to the center hull.
  double u = (p.x - g.x0()) / g.h() - 0.5;
  double v = (p.y - g.y0()) / g.h() - 0.5;
  u = std::clamp(u, 0.0, static_cast<double>(g.nx() - 1));
  v = std::clamp(v, 0.0, static_cast<double>(g.ny() - 1));
  int i0 = std::min(static_cast<int>(std::floor(u)), g.nx() - 2);
  int j0 = std::min(static_cast<int>(std::floor(v)), g.ny() - 2);
  if (g.nx() == 1) i0 = 0;
  if (g.ny() == 1) j0 = 0;
  double fu = u - i0, fv = v - j0;
  int i1 = std::min(i0 + 1, g.nx() - 1), j1 = std::min(j0 + 1, g.ny() - 1);
  if (!g.inside(i0, j0) || !g.inside(i1, j0) || !g.inside(i0, j1) ||
      !g.inside(i1, j1))
    return std::nullopt;
  double a = at(i0, j0) * (1 - fu) + at(i1, j0) * fu;
  double b = at(i0, j1) * (1 - fu) + at(i1, j1) * fu;
  return a * (1 - fv) + b * fv;
}

void ScalarField::check_finite() const {
  for (int id = 0; id < grid_->size(); ++id)
    if (grid_->inside_id(id) && !std::isfinite(v_[id]))
      throw std::runtime_error("field: non-finite value on inside cell");
}

namespace {

bool same_geometry(const Grid& a, const Grid& b) {
  return a.nx() == b.nx() && a.ny() == b.ny() && a.x0() == b.x0() &&
         a.y0() == b.y0() && a.h() == b.h() && a.mask() == b.mask();
}

ScalarField zip(const ScalarField& a, const ScalarField& b,
                double (*op)(double, double)) {
  if (a.grid_ptr() != b.grid_ptr() && !same_geometry(a.grid(), b.grid()))
    throw std::invalid_argument("field op: grids differ");
  ScalarField out(a.grid_ptr());
  const Grid& g = a.grid();
  for (int id = 0; id < g.size(); ++id)
    if (g.inside_id(id)) out.set_id(id, op(a.at_id(id), b.at_id(id)));
  return out;
}

}  // namespace

ScalarField add(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x + y; });
}

ScalarField sub(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x - y; });
}

ScalarField scale(const ScalarField& a, double s) {
  return apply(a, [s](double x) { return s * x; });
}

ScalarField shift(const ScalarField& a, double c) {
  return apply(a, [c](double x) { return x + c; });
}

ScalarField apply(const ScalarField& a,
                  const std::function<double(double)>& f) {
  ScalarField out(a.grid_ptr());
  const Grid& g = a.grid();
  for (int id = 0; id < g.size(); ++id)
    if (g.inside_id(id)) out.set_id(id, f(a.at_id(id)));
  return out;
}

double integrate(const ScalarField& f, const Region& region) {
  const Grid& g = f.grid();
  double sum = 0.0;
  size_t n = 0;
  for (int id = 0; id < g.size(); ++id) {
    if (!g.inside_id(id)) continue;
    if (!region.contains(g.center_id(id))) continue;
    sum += f.at_id(id);
    ++n;
  }
  if (n == 0) throw std::runtime_error("integrate: empty region");
  return sum * g.h() * g.h();
}

ScalarField laplacian(const ScalarField& f) {
  const Grid& g = f.grid();
  auto interior = g.eroded();
  ScalarField out(interior);
  double inv_h2 = 1.0 / (g.h() * g.h());
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!interior->inside(i, j)) continue;
      double s = f.at(i + 1, j) + f.at(i - 1, j) + f.at(i, j + 1) +
                 f.at(i, j - 1) - 4.0 * f.at(i, j);
      out.set(i, j, s * inv_h2);
    }
  return out;
}

std::pair<ScalarField, ScalarField> gradient(const ScalarField& f) {
  const Grid& g = f.grid();
  auto interior = g.eroded();
  ScalarField fx(interior), fy(interior);
  double inv_2h = 0.5 / g.h();
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!interior->inside(i, j)) continue;
      fx.set(i, j, (f.at(i + 1, j) - f.at(i - 1, j)) * inv_2h);
      fy.set(i, j, (f.at(i, j + 1) - f.at(i, j - 1)) * inv_2h);
    }
  return {std::move(fx), std::move(fy)};
}

ScalarField rescale_blowup(const ScalarField& f, Point center, double r,
                           bool log_shift, double half_width, int res) {
  if (!(r > 0)) throw std::invalid_argument("rescale: scale must be positive");
  auto window = Grid::square(half_width, res);
  double c = log_shift ? std::log(r) : 0.0;
  std::vector<uint8_t> mask(window->size(), 0);
  std::vector<double> vals(window->size(), 0.0);
  size_t hits = 0;
  for (int id = 0; id < window->size(); ++id) {
    Point y = window->center_id(id);
    auto v = f.interp(center + r * y);
    // Clamped interpolation must not fabricate values outside the source box.
    Point src = center + r * y;
    const Grid& sg = f.grid();
    bool in_box = src.x >= sg.x0() && src.x <= sg.x0() + sg.nx() * sg.h() &&
                  src.y >= sg.y0() && src.y <= sg.y0() + sg.ny() * sg.h();
    if (v && in_box) {
      mask[id] = 1;
      vals[id] = *v + c;
      ++hits;
    }
  }
  if (hits == 0) throw std::runtime_error("rescale: window outside grid");
  auto grid = std::make_shared<Grid>(window->nx(), window->ny(), window->x0(),
                                     window->y0(), window->h(),
                                     std::move(mask));
  ScalarField out(grid);
  for (int id = 0; id < grid->size(); ++id)
    if (grid->inside_id(id)) out.set_id(id, vals[id]);
  return out;
}

ScalarField embed(const ScalarField& src, std::shared_ptr<const Grid> dst,
                  double fill) {
  ScalarField out(dst, fill);
  const Grid& g = *dst;
  const Grid& s = src.grid();
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!g.inside(i, j)) continue;
      auto cell = s.cell_at(g.center(i, j));
      if (!cell) continue;
      auto [si, sj] = *cell;
      if (s.inside(si, sj)) out.set(i, j, src.at(si, sj));
    }
  return out;
}

ScalarField indicator(std::shared_ptr<const Grid> grid, const Region& region) {
  std::vector<uint8_t> mask(grid->size(), 0);
  for (int id = 0; id < grid->size(); ++id)
    mask[id] = grid->inside_id(id) && region.contains(grid->center_id(id));
  auto g = std::make_shared<Grid>(grid->nx(), grid->ny(), grid->x0(),
                                  grid->y0(), grid->h(), std::move(mask));
  return ScalarField(g, 1.0);
}

// ---------------------------------------------------------------------------
// CONFGRID v1

void write_confgrid(const ScalarField& f, std::ostream& out) {
  const Grid& g = f.grid();
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d %d %.17g %.17g %.17g", g.nx(), g.ny(),
                g.x0(), g.y0(), g.h());
  out << buf << '\n';
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (i) out << ' ';
      if (g.inside(i, j)) {
        std::snprintf(buf, sizeof buf, "%.17g", f.at(i, j));
        out << buf;
      } else {
        out << "nan";
      }
    }
    out << '\n';
  }
}

void write_confgrid_file(const ScalarField& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  write_confgrid(f, out);
}

ScalarField read_confgrid(std::istream& in) {
  int nx = 0, ny = 0;
  double x0 = 0, y0 = 0, h = 0;
  if (!(in >> nx >> ny >> x0 >> y0 >> h))
    throw std::runtime_error("confgrid: bad header");
  if (nx <= 0 || ny <= 0 || !(h > 0))
    throw std::runtime_error("confgrid: bad header");
  std::vector<double> vals(static_cast<size_t>(nx) * ny);
  std::vector<uint8_t> mask(vals.size(), 0);
  for (size_t k = 0; k < vals.size(); ++k) {
    std::string tok;
    if (!(in >> tok)) throw std::runtime_error("confgrid: truncated data");
    if (tok == "nan" || tok == "NaN" || tok == "-nan") {
      vals[k] = 0;
    } else {
      try {
        vals[k] = std::stod(tok);
      } catch (const std::exception&) {
        throw std::runtime_error("confgrid: bad value '" + tok + "'");
      }
      mask[k] = 1;
    }
  }
  auto grid = std::make_shared<Grid>(nx, ny, x0, y0, h, std::move(mask));
  ScalarField out(grid);
  for (int id = 0; id < grid->size(); ++id)
    if (grid->inside_id(id)) out.set_id(id, vals[id]);
  return out;
}

ScalarField read_confgrid_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_confgrid(in);
}

}  // namespace confgeo
