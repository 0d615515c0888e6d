#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace confgeo {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline double dist(Point a, Point b) { return norm(a - b); }

// Planar region used to restrict quadrature, norms and solves. Geometric
// kinds know their boundary distance; cell-set regions (geodesic balls)
// only answer containment.
class Region {
 public:
  static Region disk(Point center, double radius);
  static Region annulus(Point center, double r_in, double r_out);
  static Region rect(double x0, double y0, double x1, double y1);
  static Region everywhere();
  static Region cell_set(std::shared_ptr<const std::vector<uint8_t>> mask,
                         int nx, int ny, double x0, double y0, double h);

  bool contains(Point p) const;

  // Distance from p to the region boundary, positive inside, negative
  // outside. NaN when the region has no analytic boundary (cell sets,
  // everywhere).
  double boundary_distance(Point p) const;

  Point center_hint() const { return center_; }
  std::string describe() const;

 private:
  enum class Kind { Disk, Annulus, Rect, Everywhere, CellSet };
  Kind kind_ = Kind::Everywhere;
  Point center_{};
  double r0_ = 0.0, r1_ = 0.0;  // disk/annulus radii, rect corners via center_
  double x0_ = 0.0, y0_ = 0.0, x1_ = 0.0, y1_ = 0.0;
  std::shared_ptr<const std::vector<uint8_t>> cells_;
  int nx_ = 0, ny_ = 0;
  double cx0_ = 0.0, cy0_ = 0.0, h_ = 0.0;
};

// Uniform cell-centered grid with an inside/outside mask. Cell (i,j) has
// center (x0 + (i+1/2)h, y0 + (j+1/2)h); values are stored row-major with
// index j*nx + i.
class Grid {
 public:
  Grid(int nx, int ny, double x0, double y0, double h,
       std::vector<uint8_t> inside);

  static std::shared_ptr<const Grid> rect(int nx, int ny, double x0, double y0,
                                          double h);
  // Square box [-half,half]^2 with res cells per side, full mask.
  static std::shared_ptr<const Grid> square(double half, int res);
  static std::shared_ptr<const Grid> disk(Point center, double radius,
                                          int res);
  static std::shared_ptr<const Grid> annulus(double r_in, double r_out,
                                             int res);
  // Box [x0,x1]x[y0,y1] with nx cells along x, masked by a region.
  static std::shared_ptr<const Grid> box_masked(double x0, double y0,
                                                double x1, double y1, int nx,
                                                const Region& region);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double x0() const { return x0_; }
  double y0() const { return y0_; }
  double h() const { return h_; }
  int size() const { return nx_ * ny_; }

  int id(int i, int j) const { return j * nx_ + i; }
  bool in_range(int i, int j) const {
    return i >= 0 && i < nx_ && j >= 0 && j < ny_;
  }
  bool inside(int i, int j) const {
    return in_range(i, j) && inside_[id(i, j)] != 0;
  }
  bool inside_id(int id) const { return inside_[id] != 0; }
  const std::vector<uint8_t>& mask() const { return inside_; }

  Point center(int i, int j) const {
    return {x0_ + (i + 0.5) * h_, y0_ + (j + 0.5) * h_};
  }
  Point center_id(int id) const { return center(id % nx_, id / nx_); }

  // Cell containing p, or nullopt when p is outside the grid box.
  std::optional<std::pair<int, int>> cell_at(Point p) const;

  size_t inside_count() const;
  bool inside_connected() const;  // 4-connectivity

  // Interior cells: inside with all four axis neighbors inside.
  bool interior(int i, int j) const;
  std::shared_ptr<const Grid> eroded() const;

 private:
  int nx_, ny_;
  double x0_, y0_, h_;
  std::vector<uint8_t> inside_;
};

// Scalar samples on the inside cells of a grid. Masked cells hold NaN.
class ScalarField {
 public:
  explicit ScalarField(std::shared_ptr<const Grid> grid, double fill = 0.0);
  static ScalarField sample(std::shared_ptr<const Grid> grid,
                            const std::function<double(Point)>& f);

  const Grid& grid() const { return *grid_; }
  std::shared_ptr<const Grid> grid_ptr() const { return grid_; }

  double at(int i, int j) const { return v_[grid_->id(i, j)]; }
  double at_id(int id) const { return v_[id]; }
  void set(int i, int j, double value) { v_[grid_->id(i, j)] = value; }
  void set_id(int id, double value) { v_[id] = value; }
  const std::vector<double>& values() const { return v_; }

  // Bilinear interpolation between cell centers; the query point is clamped
  // to the center hull. Returns nullopt when any of the four surrounding
  // cells is masked.
  std::optional<double> interp(Point p) const;

  void check_finite() const;  // throws when an inside cell is not finite

 private:
  std::shared_ptr<const Grid> grid_;
  std::vector<double> v_;
};

// Pointwise arithmetic on a shared grid.
ScalarField add(const ScalarField& a, const ScalarField& b);
ScalarField sub(const ScalarField& a, const ScalarField& b);
ScalarField scale(const ScalarField& a, double s);
ScalarField shift(const ScalarField& a, double c);
ScalarField apply(const ScalarField& a,
                  const std::function<double(double)>& f);

// Midpoint-rule integral over inside cells whose centers lie in the region.
// Throws "empty region" when no cell qualifies.
double integrate(const ScalarField& f, const Region& region);

// Five-point Laplacian, defined on the eroded (interior) grid.
ScalarField laplacian(const ScalarField& f);

// Centered differences on the eroded grid; returns (df/dx, df/dy).
std::pair<ScalarField, ScalarField> gradient(const ScalarField& f);

// Zoom into a window: result(y) = f(center + r*y) + (log r when log_shift),
// sampled bilinearly on a square grid of the given half width. The additive
// log r keeps the rescaled conformal factor isometric to the original, so
// Gauss curvature is preserved at corresponding points. Throws when the
// window misses the source grid entirely.
ScalarField rescale_blowup(const ScalarField& f, Point center, double r,
                           bool log_shift, double half_width = 4.0,
                           int res = 256);

// Copy values of src into a field on dst's grid (matching cells by plane
// position); cells without a source value get `fill`.
ScalarField embed(const ScalarField& src, std::shared_ptr<const Grid> dst,
                  double fill = 0.0);

// Field that is 1 on the cells of grid ∩ region and masked elsewhere; the
// CONFGRID form of a region mask (geodesic balls in particular).
ScalarField indicator(std::shared_ptr<const Grid> grid, const Region& region);

// CONFGRID v1: header "nx ny x0 y0 h", then nx*ny whitespace-separated
// values row-major with "nan" for masked cells.
void write_confgrid(const ScalarField& f, std::ostream& out);
void write_confgrid_file(const ScalarField& f, const std::string& path);
ScalarField read_confgrid(std::istream& in);
ScalarField read_confgrid_file(const std::string& path);

}  // namespace confgeo
