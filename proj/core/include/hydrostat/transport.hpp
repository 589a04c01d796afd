#pragma once

// Density transport with horizontal regularization,
//
//   rho_t + u rho_x + w rho_y - lambda rho_xx = 0,   w = -integral_0^y u_x ds,
//
// advanced by forward Euler with first-order upwinding of the advective form
// and explicit centered x-diffusion. Under the step restriction
// dt (|u|/hx + |w|/hy + 2 lambda/hx^2) <= 1 every update is a convex
// combination of neighbouring values, so min and max never move outward.

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "hydrostat/grid_field.hpp"

namespace hydrostat {

struct TransportParams {
  double lambda = 0.0;
  double dt = 0.0;
  bool cfl_guard = true;
};

/// w = -cumint_y(dx(u)). Requires a dirichlet_zero u. w(., 0) = 0 exactly;
/// |w(., 1)| is the depth-integrated divergence residual and is not forced to 0.
ScalarField vertical_velocity(const ScalarField& u);

/// Largest node value of dt (|u|/hx + |w|/hy + 2 lambda/hx^2).
double transport_courant(const ScalarField& u, const ScalarField& w, double lambda, double dt);

/// One step. Rows j = 0 and j = Ny get no vertical advection (w vanishes on
/// the walls, characteristics are tangent there).
ScalarField transport_step(const ScalarField& rho, const ScalarField& u, const ScalarField& w,
                           const TransportParams& params);

/// Number of steps and the adjusted step so that steps * dt == T.
std::pair<int, double> time_steps(double T, double dt);

struct TransportTrajectory {
  std::vector<double> times;
  std::vector<ScalarField> rho;
  std::vector<double> min;
  std::vector<double> max;
  std::vector<double> mass;
  std::vector<double> grad_linf;
};

/// Velocity (u, w) used to advance from step n at time t.
using VelocityProvider = std::function<std::pair<ScalarField, ScalarField>(int step, double t)>;

/// Advances rho0 to T with steps of params.dt (adjusted to land on T).
/// Every accepted step is checked against the discrete maximum principle.
TransportTrajectory transport_solve(const ScalarField& rho0, const VelocityProvider& velocity,
                                    const TransportParams& params, double T);

struct DensityGrowthReport {
  /// log(||grad rho(t)||_inf / ||grad rho0||_inf) / integral_0^t ||v||_H3 ds,
  /// NaN where the denominator is below 1e-12.
  std::vector<double> c_grad;
  /// log(||hess rho(t)||_L2 / (||grad rho0||_inf + ||hess rho0||_L2)) / same integral.
  std::vector<double> c_hess;
  double c_grad_max = 0.0;
  double c_hess_max = 0.0;
  bool degenerate = true;
};

/// velocity_h3[n] is ||v(t_n)||_H3; integrated with the left rectangle rule
/// on the trajectory times.
DensityGrowthReport density_growth_check(const TransportTrajectory& traj,
                                         std::span<const double> velocity_h3);

}  // namespace hydrostat
