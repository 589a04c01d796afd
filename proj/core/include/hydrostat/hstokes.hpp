#pragma once

// Variable-viscosity hydrostatic Stokes solver:
//
//   shift*u - div(mu grad u) + dP/dx = f   in the interior,
//   d/dx (integral_0^1 u dy) = 0,           P = P(x), mean zero,
//   u = 0 at y = 0, 1, periodic in x.
//
// Unknowns are u at interior nodes and P at the Nx x nodes. The viscous term
// uses a conservative five-point flux stencil with face-averaged mu; the
// pressure gradient and the depth-integrated constraint use the centered
// periodic difference, scaled so the saddle-point matrix is symmetric.
//
// The centered difference annihilates both the constant and the (-1)^i mode,
// so two constraint rows are redundant (the even and odd row sums telescope to
// zero). Rows i = 0 and i = 1 are replaced by the gauges sum P = 0 and
// sum (-1)^i P = 0. Every replaced constraint still holds at the solution.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "hydrostat/grid_field.hpp"
#include "hydrostat/viscosity.hpp"

namespace hydrostat {

enum class FaceAverage { arithmetic, harmonic };
enum class LinearSolverKind { direct, iterative };

struct StokesOptions {
  FaceAverage face_average = FaceAverage::arithmetic;
  LinearSolverKind linear_solver = LinearSolverKind::direct;
  /// Relative residual target and iteration cap of the Krylov path.
  double iterative_tol = 1e-13;
  int iterative_max_iter = 400;
  /// Invariant thresholds enforced on every solve.
  double constraint_tol = 1e-9;
  double residual_tol = 1e-9;
};

struct HStokesSolution {
  ScalarField u;
  PressureProfile P;
  /// max_x |dx(integral_0^1 u dy)|
  double constraint_residual = 0.0;
  /// ||K x - b|| / ||b|| of the assembled system (absolute when b = 0).
  double linsolve_residual = 0.0;
  int iterations = 0;
};

/// Face-averaged viscosity at x faces (i+1/2, j) and y faces (i, j+1/2).
struct FaceViscosity {
  std::vector<double> x_faces;  // Nx*(Ny+1), index (i, j) means face (i+1/2, j)
  std::vector<double> y_faces;  // Nx*Ny, index i*Ny + j means face (i, j+1/2)
};

FaceViscosity face_viscosity(const ScalarField& mu, FaceAverage average);

/// Discrete Dirichlet form sum_faces mu_face |difference quotient|^2 * hx*hy.
/// This is the exact energy of the assembled viscous stencil.
double dirichlet_form(const ScalarField& mu, const ScalarField& u, FaceAverage average);

/// Viscous stencil -div(mu grad u) applied at interior nodes; walls of the
/// output are zero.
ScalarField apply_viscous(const ScalarField& mu, const ScalarField& u, FaceAverage average);

/// Assembled and factorized saddle-point operator. Immutable; copies share the
/// factorization and concurrent solves with distinct right-hand sides are safe.
class StokesOperator {
 public:
  /// mu must be >= mu_floor everywhere; shift, if given, must be >= 0.
  static StokesOperator assemble(const ScalarField& mu, double mu_floor,
                                 const std::optional<ScalarField>& shift = std::nullopt,
                                 const StokesOptions& options = {});
  /// Evaluates the law on rho (checking its floor) and assembles.
  static StokesOperator assemble(const ViscosityLaw& law, const ScalarField& rho,
                                 const std::optional<ScalarField>& shift = std::nullopt,
                                 const StokesOptions& options = {});

  HStokesSolution solve(const ScalarField& f) const;

  const Grid& grid() const;
  const ScalarField& mu() const;
  const ScalarField& shift() const;
  const StokesOptions& options() const;
  const Eigen::SparseMatrix<double>& matrix() const;
  int velocity_unknowns() const;
  int velocity_index(int i, int j) const;

  /// Right-hand side vector for forcing f (interior rows; zeros elsewhere).
  Eigen::VectorXd rhs(const ScalarField& f) const;
  /// Unpacks a solution vector into (u, P).
  void unpack(const Eigen::VectorXd& x, ScalarField& u, PressureProfile& p) const;
  Eigen::VectorXd pack(const ScalarField& u, const PressureProfile& p) const;

  /// Largest of max_row(sum_{k != r} |a_rk| / |a_rr|) over the u-u block.
  double uu_offdiag_to_diag_ratio() const;

 private:
  struct State;
  explicit StokesOperator(std::shared_ptr<const State> state) : state_(std::move(state)) {}
  std::shared_ptr<const State> state_;
};

/// Equivalent to op.solve(f).
HStokesSolution solve_hstokes(const StokesOperator& op, const ScalarField& f);

/// max_x |dx(integral_0^1 u dy)|
double constraint_residual(const ScalarField& u);

struct PtildeResult {
  HStokesSolution solution;
  bool converged = false;
  /// Successive update norms ||u^{n+1} - u^n||_L2.
  std::vector<double> updates;
  /// L2 norm of mu*Ptilde minus its y-average (the x-only reconstruction gap).
  double reconstruction_gap = 0.0;
};

/// Alternative solution path: defect correction where every sweep solves the
/// unit-viscosity hydrostatic Stokes problem for (du, dPtilde) with the
/// residual of the variable-viscosity system divided by mu on the right side.
/// P is updated by the y-average of mu*dPtilde. The fixed point is the
/// solution of the assembled variable-viscosity system. Non-convergence is
/// reported through `converged`, not thrown.
PtildeResult ptilde_fixed_point(const ScalarField& mu, double mu_floor, const ScalarField& f,
                                double tol, int max_iter, const StokesOptions& options = {});

struct RegularityReport {
  bool degenerate = false;
  /// (||u||_H2 + ||P||_H1) / ((1 + ||grad rho||_inf) ||f||_L2)
  double c_h2 = 0.0;
  /// (||u||_H3 + ||P||_H2) / ((1 + g + g^2)(1 + ||hess rho||_L2) ||f||_H1), g = ||grad rho||_inf
  double c_h3 = 0.0;
};

RegularityReport regularity_check(const HStokesSolution& sol, const ScalarField& rho,
                                  const ScalarField& f);

// ---------------------------------------------------------------------------
// Manufactured solutions.

using ScalarFn = std::function<double(double, double)>;

/// Exact data of a manufactured hydrostatic Stokes problem. The derivative
/// callbacks are optional; when all are present mms_forcing differentiates
/// analytically, otherwise numerically.
struct MmsCase {
  std::string name;
  double length = 1.0;
  ScalarFn u;
  std::function<double(double)> p;
  ScalarFn rho;
  ViscosityLaw law = ViscosityLaw::constant(1.0, 0.5);

  ScalarFn u_x, u_y, u_xx, u_yy;
  std::function<double(double)> p_x;
  ScalarFn rho_x, rho_y;

  bool has_analytic_derivatives() const;
};

enum class Differentiation { automatic, analytic, numerical };

/// f = -div(mu(rho*) grad u*) + dP*/dx sampled on the grid.
/// Checks u* = 0 at the walls and that integral_0^1 u* dy is x-independent.
ScalarField mms_forcing(const MmsCase& mms, const Grid& grid,
                        Differentiation mode = Differentiation::automatic);

/// u* = sin(2 pi x) sin(2 pi y), P* = cos(2 pi x), rho* = 1, mu = 1.
MmsCase mms_constant_mu();
/// Same pair with mu = 3/4 + rho/4 and rho* = 1 + sin(2 pi x)(1 - cos(2 pi y))/2,
/// i.e. mu = 1 + (1/4) sin(2 pi x)(1 - cos(2 pi y))/2.
MmsCase mms_variable_mu();
/// Zero solution.
MmsCase mms_zero();
MmsCase mms_case_by_name(const std::string& name);

struct ConvergenceLevel {
  int n = 0;
  double h = 0.0;
  double u_l2 = 0.0;
  double u_h1 = 0.0;
  double p_l2 = 0.0;
  double constraint_residual = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceLevel> levels;
  double order_u_l2 = 0.0;
  double order_u_h1 = 0.0;
  double order_p_l2 = 0.0;
  bool degenerate = false;
};

/// Solves the case on Nx = Ny = n for each level (each doubling the last) and
/// fits the least-squares slope of log(error) against log(h).
ConvergenceReport convergence_study(const MmsCase& mms, const std::vector<int>& levels,
                                    const StokesOptions& options = {});

/// Least-squares slope of log(err) vs log(h).
double fitted_order(const std::vector<double>& h, const std::vector<double>& err);

}  // namespace hydrostat
