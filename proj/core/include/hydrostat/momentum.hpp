#pragma once

// Linearized momentum equation with a known transport velocity v:
//
//   rho u_t + rho (v u_x + w_v u_y) + P_x - div(mu(rho) grad u) = rho f,
//   w_v = -integral_0^y v_x ds,   d/dx integral_0^1 u dy = 0,
//
// stepped with backward Euler in the viscous and pressure terms and explicit,
// lagged advection. Each step is one hydrostatic Stokes solve with shift rho/dt.

#include <optional>
#include <string>
#include <vector>

#include "hydrostat/grid_field.hpp"
#include "hydrostat/hstokes.hpp"
#include "hydrostat/viscosity.hpp"

namespace hydrostat {

/// Separable forcing g(t) F(x, y) with g in {1, ramp, sinusoid}.
class Forcing {
 public:
  enum class Profile { constant, ramp, sinusoid };

  Forcing() = default;
  explicit Forcing(ScalarField shape, Profile profile = Profile::constant, double period = 1.0);

  static Forcing zero(const Grid& grid);

  /// ramp: min(t/period, 1); sinusoid: sin(2 pi t / period).
  double amplitude(double t) const;
  ScalarField at(double t) const;
  const ScalarField& shape() const { return shape_; }
  Profile profile() const { return profile_; }

 private:
  ScalarField shape_;
  Profile profile_ = Profile::constant;
  double period_ = 1.0;
};

struct CompatibilityData {
  PressureProfile P0;
  /// Initial acceleration; zero on the walls.
  ScalarField V1;
  /// L2 norm of rho0*V1 minus the initial force balance.
  double residual = 0.0;
  /// max_x |dx integral_0^1 V1 dy|
  double constraint_residual = 0.0;
  /// Interior nodes with rho0 below the regularization threshold.
  int vacuum_nodes = 0;
};

/// Initial force balance without the pressure term:
/// -rho0 u0 u0_x - rho0 w0 u0_y + div(mu(rho0) grad u0) + rho0 f0 at interior
/// nodes (zero on the walls), with w0 = vertical_velocity(u0).
ScalarField initial_force_balance(const ScalarField& rho0, const ScalarField& u0,
                                  const ScalarField& f0, const ViscosityLaw& law,
                                  FaceAverage average = FaceAverage::arithmetic);

/// P0 (mean zero, x only) such that V1 = (balance - P0_x)/max(rho0, eps) has a
/// depth integral with vanishing centered x difference. Integrating in y gives
/// a(x) P0_x = b(x) - c(x), with c in the kernel of the centered difference;
/// P0 follows from two decoupled cumulative sums on the even and odd nodes.
PressureProfile compute_initial_pressure(const ScalarField& rho0, const ScalarField& u0,
                                         const ScalarField& f0, const ViscosityLaw& law,
                                         double eps_rho = 1e-10,
                                         FaceAverage average = FaceAverage::arithmetic);

CompatibilityData compatibility_v1(const ScalarField& rho0, const ScalarField& u0,
                                   const PressureProfile& P0, const ScalarField& f0,
                                   const ViscosityLaw& law, double eps_rho = 1e-10,
                                   FaceAverage average = FaceAverage::arithmetic);

struct MomentumOptions {
  StokesOptions stokes;
  bool cfl_guard = true;
};

struct MomentumStepReport {
  double t = 0.0;
  /// ||sqrt(rho) u_t||^2 + (D_mu(u_new) - D_mu_prev(u_old)) / (2 dt)
  double energy_lhs = 0.0;
  /// (rho f, u_t) - (rho adv, u_t) + (D_mu(u_old) - D_mu_prev(u_old)) / (2 dt)
  double energy_rhs = 0.0;
  double sqrt_rho_ut_l2 = 0.0;
  double constraint_residual = 0.0;
  /// integral rho |u_new|^2
  double kinetic_energy = 0.0;
  /// D_mu(u_new), the discrete Dirichlet form.
  double dissipation = 0.0;
  /// Viscosity-change term (D_mu(u_old) - D_mu_prev(u_old)) / (2 dt).
  double mu_t_correction = 0.0;
};

struct MomentumStepResult {
  ScalarField u;
  PressureProfile P;
  MomentumStepReport report;
};

/// One step from u_old with density rho (also used for the report weights).
/// rho_prev, when given, is the density of the previous step and enters the
/// viscosity-change term of the energy ledger.
MomentumStepResult momentum_step(const ScalarField& rho, const ScalarField& v,
                                 const ScalarField& u_old, const ScalarField& f,
                                 const ViscosityLaw& law, double dt,
                                 const MomentumOptions& options = {},
                                 const ScalarField* rho_prev = nullptr);

struct MomentumTrajectory {
  std::vector<double> times;
  std::vector<ScalarField> u;
  std::vector<PressureProfile> P;
  std::vector<MomentumStepReport> reports;
  /// integral_0^T ||sqrt(rho) u_t||^2 dt
  double int_rho_ut_sq = 0.0;
  double sup_grad_u = 0.0;
  /// y(t_n) = integral_0^t ||sqrt(rho) u_t||^2 + ||grad u(t_n)||^2
  std::vector<double> energy_bound_series;
  /// max_n y(t_n) / (1 + integral_0^t Phi^8), the empirical bound constant.
  double energy_bound_constant = 0.0;
};

/// Steps n = 0..N-1 use rho_traj[n] and v_traj[n]; the forcing is taken at
/// the new time level. Both trajectories must have N + 1 entries where
/// N = time_steps(T, dt).first.
MomentumTrajectory momentum_solve(const std::vector<ScalarField>& rho_traj,
                                  const std::vector<ScalarField>& v_traj, const ScalarField& u0,
                                  const Forcing& forcing, const ViscosityLaw& law, double dt,
                                  double T, const MomentumOptions& options = {},
                                  const std::optional<PressureProfile>& P0 = std::nullopt);

}  // namespace hydrostat
