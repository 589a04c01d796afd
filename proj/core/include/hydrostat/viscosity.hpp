#pragma once

#include <string>
#include <vector>

#include "hydrostat/grid_field.hpp"

namespace hydrostat {

/// Density-dependent viscosity mu(rho) with a uniform positive floor.
///
/// The table kind interpolates uniformly spaced samples on [0, table_rho_max]
/// with a natural cubic spline, so mu is C^2; beyond the last sample it
/// continues linearly.
class ViscosityLaw {
 public:
  enum class Kind { constant, affine, quadratic, table };

  static ViscosityLaw constant(double mu, double floor);
  static ViscosityLaw affine(double c0, double c1, double floor);
  static ViscosityLaw quadratic(double c0, double c1, double c2, double floor);
  static ViscosityLaw table(std::vector<double> samples, double rho_max, double floor);

  Kind kind() const { return kind_; }
  double floor() const { return floor_; }
  const std::vector<double>& coefficients() const { return coeffs_; }

  double operator()(double rho) const;
  double derivative(double rho) const;
  double second_derivative(double rho) const;

  /// Nodal mu(rho). Throws PreconditionError if any value falls below the floor.
  ScalarField evaluate(const ScalarField& rho) const;
  /// Checks mu >= floor on [rho_lo, rho_hi] by dense sampling.
  void check_range(double rho_lo, double rho_hi) const;

 private:
  ViscosityLaw() = default;
  void build_spline();

  Kind kind_ = Kind::constant;
  double floor_ = 1.0;
  std::vector<double> coeffs_;
  // Table data: samples, spline second derivatives, spacing.
  std::vector<double> table_;
  std::vector<double> m2_;
  double table_h_ = 1.0;
};

std::string to_string(ViscosityLaw::Kind kind);

}  // namespace hydrostat
