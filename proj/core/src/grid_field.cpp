#include "hydrostat/grid_field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "hydrostat/errors.hpp"

namespace hydrostat {

Grid make_grid(double length, int nx, int ny) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw PreconditionError("make_grid: domain length must be positive and finite");
  }
  if (nx < 8 || nx % 2 != 0) {
    throw PreconditionError("make_grid: Nx must be even and at least 8, got " +
                            std::to_string(nx));
  }
  if (ny < 8) {
    throw PreconditionError("make_grid: Ny must be at least 8, got " + std::to_string(ny));
  }
  return Grid(length, nx, ny);
}

namespace {

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw PreconditionError("ScalarField: operands live on different grids");
}

}  // namespace

ScalarField::ScalarField(const Grid& grid, BoundaryY bc, std::vector<double> values)
    : grid_(grid), bc_(bc), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw PreconditionError("ScalarField: value count does not match the grid");
  }
}

void ScalarField::set_bc(BoundaryY bc) {
  bc_ = bc;
  if (bc_ == BoundaryY::dirichlet_zero) zero_walls();
}

void ScalarField::zero_walls() {
  for (int i = 0; i < grid_.nx(); ++i) {
    values_[grid_.index(i, 0)] = 0.0;
    values_[grid_.index(i, grid_.ny())] = 0.0;
  }
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

void ScalarField::check_valid(const char* what) const {
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      std::ostringstream os;
      os << what << ": non-finite value at node " << k;
      throw PreconditionError(os.str());
    }
  }
  if (bc_ == BoundaryY::dirichlet_zero) {
    for (int i = 0; i < grid_.nx(); ++i) {
      if ((*this)(i, 0) != 0.0 || (*this)(i, grid_.ny()) != 0.0) {
        throw PreconditionError(std::string(what) + ": dirichlet_zero field is nonzero at a wall");
      }
    }
  }
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
  if (o.bc_ != BoundaryY::dirichlet_zero) bc_ = BoundaryY::free;
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
  if (o.bc_ != BoundaryY::dirichlet_zero) bc_ = BoundaryY::free;
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid());
  const bool zero = a.bc() == BoundaryY::dirichlet_zero || b.bc() == BoundaryY::dirichlet_zero;
  ScalarField out(a.grid(), BoundaryY::free);
  auto o = out.values();
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] = av[k] * bv[k];
  if (zero) out.set_bc(BoundaryY::dirichlet_zero);
  return out;
}

PressureProfile::PressureProfile(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(grid_.nx())) {
    throw PreconditionError("PressureProfile: value count does not match Nx");
  }
}

double PressureProfile::mean() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * grid_.hx() / grid_.length();
}

void PressureProfile::project_mean_zero() {
  const double m = mean();
  for (double& v : values_) v -= m;
}

ScalarField PressureProfile::expand() const {
  ScalarField out(grid_, BoundaryY::free);
  for (int i = 0; i < grid_.nx(); ++i) {
    for (int j = 0; j <= grid_.ny(); ++j) out(i, j) = values_[static_cast<std::size_t>(i)];
  }
  return out;
}

ScalarField sample(const Grid& grid, const FieldFunction& fn, BoundaryY bc) {
  ScalarField out(grid, BoundaryY::free);
  for (int i = 0; i < grid.nx(); ++i) {
    for (int j = 0; j <= grid.ny(); ++j) {
      const double v = fn(grid.x(i), grid.y(j));
      if (!std::isfinite(v)) {
        throw PreconditionError("sample: function is not finite at a grid node");
      }
      out(i, j) = v;
    }
  }
  if (bc == BoundaryY::dirichlet_zero) {
    for (int i = 0; i < grid.nx(); ++i) {
      if (std::abs(out(i, 0)) > 1e-12 || std::abs(out(i, grid.ny())) > 1e-12) {
        throw PreconditionError("sample: function does not vanish at y = 0, 1");
      }
    }
  }
  out.set_bc(bc);
  return out;
}

PressureProfile sample_profile(const Grid& grid, const std::function<double(double)>& fn) {
  PressureProfile p(grid);
  for (int i = 0; i < grid.nx(); ++i) {
    p[i] = fn(grid.x(i));
    if (!std::isfinite(p[i])) throw PreconditionError("sample_profile: non-finite value");
  }
  return p;
}

ScalarField dx(const ScalarField& f) {
  const Grid& g = f.grid();
  ScalarField out(g, BoundaryY::free);
  const double inv = 1.0 / (2.0 * g.hx());
  for (int i = 0; i < g.nx(); ++i) {
    const int ip = g.wrap(i + 1);
    const int im = g.wrap(i - 1);
    for (int j = 0; j <= g.ny(); ++j) out(i, j) = (f(ip, j) - f(im, j)) * inv;
  }
  return out;
}

ScalarField dy(const ScalarField& f) {
  const Grid& g = f.grid();
  const int ny = g.ny();
  ScalarField out(g, BoundaryY::free);
  const double inv = 1.0 / (2.0 * g.hy());
  for (int i = 0; i < g.nx(); ++i) {
    out(i, 0) = (-3.0 * f(i, 0) + 4.0 * f(i, 1) - f(i, 2)) * inv;
    for (int j = 1; j < ny; ++j) out(i, j) = (f(i, j + 1) - f(i, j - 1)) * inv;
    out(i, ny) = (3.0 * f(i, ny) - 4.0 * f(i, ny - 1) + f(i, ny - 2)) * inv;
  }
  return out;
}

ScalarField dxx(const ScalarField& f) {
  const Grid& g = f.grid();
  ScalarField out(g, BoundaryY::free);
  const double inv = 1.0 / (g.hx() * g.hx());
  for (int i = 0; i < g.nx(); ++i) {
    const int ip = g.wrap(i + 1);
    const int im = g.wrap(i - 1);
    for (int j = 0; j <= g.ny(); ++j) out(i, j) = (f(ip, j) - 2.0 * f(i, j) + f(im, j)) * inv;
  }
  return out;
}

PressureProfile dx(const PressureProfile& p) {
  const Grid& g = p.grid();
  PressureProfile out(g);
  const double inv = 1.0 / (2.0 * g.hx());
  for (int i = 0; i < g.nx(); ++i) out[i] = (p[g.wrap(i + 1)] - p[g.wrap(i - 1)]) * inv;
  return out;
}

ScalarField cumint_y(const ScalarField& f) {
  const Grid& g = f.grid();
  ScalarField out(g, BoundaryY::free);
  const double half = 0.5 * g.hy();
  for (int i = 0; i < g.nx(); ++i) {
    double acc = 0.0;
    out(i, 0) = 0.0;
    for (int j = 1; j <= g.ny(); ++j) {
      acc += half * (f(i, j - 1) + f(i, j));
      out(i, j) = acc;
    }
  }
  return out;
}

std::vector<double> column_integral(const ScalarField& f) {
  const Grid& g = f.grid();
  std::vector<double> out(static_cast<std::size_t>(g.nx()));
  const double half = 0.5 * g.hy();
  for (int i = 0; i < g.nx(); ++i) {
    double acc = 0.0;
    for (int j = 1; j <= g.ny(); ++j) acc += half * (f(i, j - 1) + f(i, j));
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

double integral_domain(const ScalarField& f) {
  const Grid& g = f.grid();
  double total = 0.0;
  for (int i = 0; i < g.nx(); ++i) {
    double col = 0.5 * (f(i, 0) + f(i, g.ny()));
    for (int j = 1; j < g.ny(); ++j) col += f(i, j);
    total += col;
  }
  return total * g.hx() * g.hy();
}

}  // namespace hydrostat
