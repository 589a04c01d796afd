#pragma once

// Discrete Lebesgue, mixed, and Sobolev norms together with the run-level
// diagnostic functionals Phi(t) and J(t) and the blow-up monitor.
//
// Sobolev norms are full norms: the square root of the sum of squared L2
// norms of every mixed difference quotient dx^a dy^b f with a + b <= k.

#include <limits>
#include <optional>
#include <vector>

#include "hydrostat/grid_field.hpp"

namespace hydrostat {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// (integral |f|^p)^(1/p); p = kInfinity gives the nodal max.
double lp_norm(const ScalarField& f, double p);
double lp_norm(const PressureProfile& p, double q);

enum class NormExponent { two, infinity };

/// Inner norm over x per y row, then outer norm over y.
double aniso_norm(const ScalarField& f, NormExponent outer_y, NormExponent inner_x);

double sobolev_norm(const ScalarField& f, int k);
/// Sobolev norm of a profile seen as a y-independent field on the domain.
double sobolev_norm(const PressureProfile& p, int k);

/// Nodal max of |grad f| (Euclidean in the two components).
double grad_linf(const ScalarField& f);
/// L2 norm of |grad f|.
double grad_l2(const ScalarField& f);
/// L2 norm of the Frobenius norm of the Hessian.
double hessian_l2(const ScalarField& f);
/// Nodal max of the Frobenius norm of the Hessian.
double hessian_linf(const ScalarField& f);
/// L2 norm of all third differences (each ordered triple counted).
double third_derivative_l2(const ScalarField& f);
/// ||f||_inf + ||grad f||_inf.
double w1inf_norm(const ScalarField& f);

/// 1 + ||grad rho||_inf + ||hess rho||_L2 + ||grad u||_L2.
double phi_functional(const ScalarField& rho, const ScalarField& u);

struct NormSnapshot {
  double t = 0.0;
  double l2_u = 0.0;
  double h1_u = 0.0;
  double h2_u = 0.0;
  double h3_u = 0.0;
  double linf_grad_rho = 0.0;
  double l2_hess_rho = 0.0;
  double w1inf_rho = 0.0;
  double w22_rho = 0.0;
  double l2_sqrt_rho_ut = 0.0;
  double h1_P = 0.0;
  double energy_residual = 0.0;
};

/// All snapshot entries except energy_residual, which the caller supplies.
NormSnapshot make_snapshot(double t, const ScalarField& rho, const ScalarField& u,
                           const ScalarField& ut, const PressureProfile& p);

/// J = 1 + ||u||_H2 + ||P||_H1 + ||sqrt(rho) u_t|| + ||rho||_W1inf + ||rho||_W22
/// + accumulated, where accumulated is the running time integral of
/// ||u_t||_H1^2 + ||u||_H3^2 + ||P||_H2^2. Throws on negative accumulated.
double j_functional(const NormSnapshot& snapshot, double accumulated);

struct PhiSeries {
  std::vector<double> times;
  std::vector<double> phi;
  std::vector<double> j;

  void append(double t, double phi_value, double j_value);
  std::size_t size() const { return times.size(); }
};

struct BlowupBreach {
  std::size_t index = 0;
  double t = 0.0;
  double phi = 0.0;
};

/// First index with phi >= threshold. Throws PreconditionError unless threshold > 1.
std::optional<BlowupBreach> blowup_monitor(const PhiSeries& series, double threshold);

/// One interpolation-inequality instance evaluated with trial constants C1 = C2 = 1.
struct GnInstance {
  double lhs = 0.0;
  double interpolation_term = 0.0;
  double lower_order_term = 0.0;
  /// lhs / (interpolation_term + lower_order_term)
  double ratio = 0.0;
  /// lhs / interpolation_term; invariant under f -> alpha f.
  double interpolation_ratio = 0.0;
  bool degenerate = false;
};

struct GnReport {
  /// ||f||_L6 against ||grad f||^(2/3) ||f||^(1/3) + ||f||.
  GnInstance l6;
  /// ||f||_{L2_y Linf_x} against ||dx f||^(1/2) ||f||^(1/2) + ||f||.
  GnInstance mixed;
  /// ||f||_Linf against ||f||_H2^(1/2) ||f||^(1/2) + ||f||.
  GnInstance linf;
};

GnReport gn_check(const ScalarField& f);

}  // namespace hydrostat
