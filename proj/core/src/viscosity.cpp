#include "hydrostat/viscosity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hydrostat/errors.hpp"

namespace hydrostat {

namespace {

void require_floor(double floor) {
  if (!(floor > 0.0) || !std::isfinite(floor)) {
    throw PreconditionError("ViscosityLaw: floor must be positive");
  }
}

}  // namespace

ViscosityLaw ViscosityLaw::constant(double mu, double floor) {
  require_floor(floor);
  ViscosityLaw law;
  law.kind_ = Kind::constant;
  law.floor_ = floor;
  law.coeffs_ = {mu};
  return law;
}

ViscosityLaw ViscosityLaw::affine(double c0, double c1, double floor) {
  require_floor(floor);
  ViscosityLaw law;
  law.kind_ = Kind::affine;
  law.floor_ = floor;
  law.coeffs_ = {c0, c1};
  return law;
}

ViscosityLaw ViscosityLaw::quadratic(double c0, double c1, double c2, double floor) {
  require_floor(floor);
  ViscosityLaw law;
  law.kind_ = Kind::quadratic;
  law.floor_ = floor;
  law.coeffs_ = {c0, c1, c2};
  return law;
}

ViscosityLaw ViscosityLaw::table(std::vector<double> samples, double rho_max, double floor) {
  require_floor(floor);
  if (samples.size() < 3) throw PreconditionError("ViscosityLaw: table needs at least 3 samples");
  if (!(rho_max > 0.0)) throw PreconditionError("ViscosityLaw: table rho_max must be positive");
  ViscosityLaw law;
  law.kind_ = Kind::table;
  law.floor_ = floor;
  law.table_ = std::move(samples);
  law.table_h_ = rho_max / static_cast<double>(law.table_.size() - 1);
  law.coeffs_ = {rho_max};
  law.build_spline();
  return law;
}

// Natural cubic spline on a uniform knot set (Thomas algorithm).
void ViscosityLaw::build_spline() {
  const std::size_t n = table_.size();
  m2_.assign(n, 0.0);
  if (n < 3) return;
  const double h = table_h_;
  std::vector<double> c(n, 0.0), d(n, 0.0);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double rhs = 6.0 * (table_[k + 1] - 2.0 * table_[k] + table_[k - 1]) / (h * h);
    const double diag = 4.0 - (k > 1 ? c[k - 1] : 0.0);
    c[k] = 1.0 / diag;
    d[k] = (rhs - (k > 1 ? d[k - 1] : 0.0)) / diag;
  }
  for (std::size_t k = n - 2; k >= 1; --k) {
    m2_[k] = d[k] - c[k] * m2_[k + 1];
    if (k == 1) break;
  }
}

double ViscosityLaw::operator()(double rho) const {
  switch (kind_) {
    case Kind::constant:
      return coeffs_[0];
    case Kind::affine:
      return coeffs_[0] + coeffs_[1] * rho;
    case Kind::quadratic:
      return coeffs_[0] + (coeffs_[1] + coeffs_[2] * rho) * rho;
    case Kind::table: {
      const double h = table_h_;
      const std::size_t n = table_.size();
      const double rho_max = h * static_cast<double>(n - 1);
      if (rho <= 0.0) {
        return table_[0] + derivative(0.0) * rho;
      }
      if (rho >= rho_max) {
        return table_[n - 1] + derivative(rho_max) * (rho - rho_max);
      }
      std::size_t k = static_cast<std::size_t>(rho / h);
      if (k >= n - 1) k = n - 2;
      const double a = (static_cast<double>(k + 1) * h - rho) / h;
      const double b = 1.0 - a;
      return a * table_[k] + b * table_[k + 1] +
             ((a * a * a - a) * m2_[k] + (b * b * b - b) * m2_[k + 1]) * h * h / 6.0;
    }
  }
  return 0.0;
}

double ViscosityLaw::derivative(double rho) const {
  switch (kind_) {
    case Kind::constant:
      return 0.0;
    case Kind::affine:
      return coeffs_[1];
    case Kind::quadratic:
      return coeffs_[1] + 2.0 * coeffs_[2] * rho;
    case Kind::table: {
      const double h = table_h_;
      const std::size_t n = table_.size();
      const double rho_max = h * static_cast<double>(n - 1);
      const double r = std::clamp(rho, 0.0, rho_max);
      std::size_t k = static_cast<std::size_t>(r / h);
      if (k >= n - 1) k = n - 2;
      const double a = (static_cast<double>(k + 1) * h - r) / h;
      const double b = 1.0 - a;
      return (table_[k + 1] - table_[k]) / h -
             (3.0 * a * a - 1.0) * h * m2_[k] / 6.0 + (3.0 * b * b - 1.0) * h * m2_[k + 1] / 6.0;
    }
  }
  return 0.0;
}

double ViscosityLaw::second_derivative(double rho) const {
  switch (kind_) {
    case Kind::constant:
    case Kind::affine:
      return 0.0;
    case Kind::quadratic:
      return 2.0 * coeffs_[2];
    case Kind::table: {
      const double h = table_h_;
      const std::size_t n = table_.size();
      const double rho_max = h * static_cast<double>(n - 1);
      if (rho <= 0.0 || rho >= rho_max) return 0.0;
      std::size_t k = static_cast<std::size_t>(rho / h);
      if (k >= n - 1) k = n - 2;
      const double a = (static_cast<double>(k + 1) * h - rho) / h;
      return a * m2_[k] + (1.0 - a) * m2_[k + 1];
    }
  }
  return 0.0;
}

ScalarField ViscosityLaw::evaluate(const ScalarField& rho) const {
  ScalarField mu(rho.grid(), BoundaryY::free);
  auto out = mu.values();
  auto in = rho.values();
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = (*this)(in[k]);
    if (!(out[k] >= floor_)) {
      std::ostringstream os;
      os << "ViscosityLaw: mu(" << in[k] << ") = " << out[k] << " is below the floor " << floor_;
      throw PreconditionError(os.str());
    }
  }
  return mu;
}

void ViscosityLaw::check_range(double rho_lo, double rho_hi) const {
  constexpr int kSamples = 1024;
  for (int s = 0; s <= kSamples; ++s) {
    const double r = rho_lo + (rho_hi - rho_lo) * s / kSamples;
    if (!((*this)(r) >= floor_)) {
      std::ostringstream os;
      os << "ViscosityLaw: mu(" << r << ") = " << (*this)(r) << " is below the floor " << floor_;
      throw PreconditionError(os.str());
    }
  }
}

std::string to_string(ViscosityLaw::Kind kind) {
  switch (kind) {
    case ViscosityLaw::Kind::constant:
      return "constant";
    case ViscosityLaw::Kind::affine:
      return "affine";
    case ViscosityLaw::Kind::quadratic:
      return "quadratic";
    case ViscosityLaw::Kind::table:
      return "table";
  }
  return "unknown";
}

}  // namespace hydrostat
