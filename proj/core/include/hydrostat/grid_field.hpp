#pragma once

// Uniform collocated mesh on [0,L]x[0,1], periodic in x with walls at y = 0, 1,
// plus the finite-difference calculus and quadrature every other module uses.
//
// Storage follows the torus convention: x_i = i*hx for i = 0..Nx-1 (x = L is the
// image of x = 0 and is not stored); y_j = j*hy for j = 0..Ny, walls included.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hydrostat {

class Grid {
 public:
  Grid() = default;

  double length() const { return length_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double hx() const { return length_ / nx_; }
  double hy() const { return 1.0 / ny_; }
  double x(int i) const { return i * hx(); }
  double y(int j) const { return j * hy(); }

  /// Number of stored nodes, Nx*(Ny+1).
  std::size_t size() const { return static_cast<std::size_t>(nx_) * (ny_ + 1); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * (ny_ + 1) + j;
  }
  /// Periodic wrap of an x index.
  int wrap(int i) const { return ((i % nx_) + nx_) % nx_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  friend Grid make_grid(double length, int nx, int ny);
  Grid(double length, int nx, int ny) : length_(length), nx_(nx), ny_(ny) {}

  double length_ = 1.0;
  int nx_ = 8;
  int ny_ = 8;
};

/// Validates L > 0, Nx >= 8 even, Ny >= 8; throws PreconditionError otherwise.
Grid make_grid(double length, int nx, int ny);

enum class BoundaryY { free, dirichlet_zero };

/// Nodal field, row index x and column index y.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(const Grid& grid, BoundaryY bc, double fill = 0.0)
      : grid_(grid), bc_(bc), values_(grid.size(), fill) {
    if (bc_ == BoundaryY::dirichlet_zero) zero_walls();
  }
  ScalarField(const Grid& grid, BoundaryY bc, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  BoundaryY bc() const { return bc_; }
  void set_bc(BoundaryY bc);

  double operator()(int i, int j) const { return values_[grid_.index(i, j)]; }
  double& operator()(int i, int j) { return values_[grid_.index(i, j)]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double min() const;
  double max() const;
  double max_abs() const;

  /// Throws PreconditionError on NaN/Inf or a nonzero wall value under dirichlet_zero.
  void check_valid(const char* what) const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);

 private:
  void zero_walls();

  Grid grid_{};
  BoundaryY bc_ = BoundaryY::free;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
/// Pointwise product. Dirichlet-zero if either factor is.
ScalarField operator*(const ScalarField& a, const ScalarField& b);

/// Function of x only, e.g. the hydrostatic pressure.
class PressureProfile {
 public:
  PressureProfile() = default;
  explicit PressureProfile(const Grid& grid, double fill = 0.0)
      : grid_(grid), values_(static_cast<std::size_t>(grid.nx()), fill) {}
  PressureProfile(const Grid& grid, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return values_[static_cast<std::size_t>(i)]; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// (hx/L) * sum of values.
  double mean() const;
  void project_mean_zero();

  /// Field constant in y with these values; bc free.
  ScalarField expand() const;

 private:
  Grid grid_{};
  std::vector<double> values_;
};

using FieldFunction = std::function<double(double x, double y)>;

/// values(i,j) = fn(x_i, y_j). Under dirichlet_zero the function must vanish
/// at the walls within 1e-12; the stored wall values are then exactly zero.
ScalarField sample(const Grid& grid, const FieldFunction& fn, BoundaryY bc);
PressureProfile sample_profile(const Grid& grid, const std::function<double(double)>& fn);

/// Centered periodic difference in x. Output bc free.
ScalarField dx(const ScalarField& f);
/// Centered in the interior, second-order one-sided at the walls. Output bc free.
ScalarField dy(const ScalarField& f);
/// Periodic second difference (f[i+1] - 2f[i] + f[i-1]) / hx^2.
ScalarField dxx(const ScalarField& f);
/// Centered periodic derivative of a profile.
PressureProfile dx(const PressureProfile& p);

/// g(x_i, y_j) = trapezoid integral of f(x_i, .) over [0, y_j].
ScalarField cumint_y(const ScalarField& f);
/// Trapezoid integral of each column over [0, 1], one value per x node.
std::vector<double> column_integral(const ScalarField& f);
/// Rectangle rule in x composed with trapezoid in y.
double integral_domain(const ScalarField& f);

/// Quadrature weight of node (i, j) used by integral_domain.
inline double quadrature_weight(const Grid& g, int j) {
  const double wy = (j == 0 || j == g.ny()) ? 0.5 * g.hy() : g.hy();
  return g.hx() * wy;
}

}  // namespace hydrostat
