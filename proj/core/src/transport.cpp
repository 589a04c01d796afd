#include "hydrostat/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hydrostat/errors.hpp"
#include "hydrostat/norms.hpp"

namespace hydrostat {

ScalarField vertical_velocity(const ScalarField& u) {
  if (u.bc() != BoundaryY::dirichlet_zero) {
    throw PreconditionError("vertical_velocity: u must vanish at the walls");
  }
  ScalarField w = cumint_y(dx(u));
  w *= -1.0;
  return w;
}

double transport_courant(const ScalarField& u, const ScalarField& w, double lambda, double dt) {
  const Grid& g = u.grid();
  const double diff = 2.0 * lambda / (g.hx() * g.hx());
  double worst = 0.0;
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 0; j <= g.ny(); ++j) {
      const bool wall = j == 0 || j == g.ny();
      const double c = std::abs(u(i, j)) / g.hx() + (wall ? 0.0 : std::abs(w(i, j)) / g.hy()) + diff;
      worst = std::max(worst, c);
    }
  }
  return worst * dt;
}

ScalarField transport_step(const ScalarField& rho, const ScalarField& u, const ScalarField& w,
                           const TransportParams& params) {
  const Grid& g = rho.grid();
  if (!(params.dt > 0.0)) throw PreconditionError("transport_step: dt must be positive");
  if (!(params.lambda >= 0.0)) throw PreconditionError("transport_step: lambda must be >= 0");
  if (rho.min() < 0.0) throw PreconditionError("transport_step: negative density");
  if (params.cfl_guard) {
    const double c = transport_courant(u, w, params.lambda, params.dt);
    if (c > 1.0 + 1e-12) {
      std::ostringstream os;
      os << "transport_step: step restriction violated (Courant sum " << c << " > 1)";
      throw PreconditionError(os.str());
    }
  }
  const double dt = params.dt;
  const double ax = dt / g.hx();
  const double ay = dt / g.hy();
  const double dl = params.lambda * dt / (g.hx() * g.hx());
  ScalarField out(g, BoundaryY::free);
  for (int i = 0; i < g.nx(); ++i) {
    const int ip = g.wrap(i + 1);
    const int im = g.wrap(i - 1);
    for (int j = 0; j <= g.ny(); ++j) {
      const double r = rho(i, j);
      const double uu = u(i, j);
      double next = r;
      // Upwind x advection.
      if (uu > 0.0) {
        next -= ax * uu * (r - rho(im, j));
      } else {
        next -= ax * uu * (rho(ip, j) - r);
      }
      if (j > 0 && j < g.ny()) {
        const double ww = w(i, j);
        if (ww > 0.0) {
          next -= ay * ww * (r - rho(i, j - 1));
        } else {
          next -= ay * ww * (rho(i, j + 1) - r);
        }
      }
      next += dl * (rho(ip, j) - 2.0 * r + rho(im, j));
      out(i, j) = next;
    }
  }
  out.check_valid("transport_step");
  return out;
}

std::pair<int, double> time_steps(double T, double dt) {
  if (!(T > 0.0)) throw PreconditionError("time_steps: final time must be positive");
  if (!(dt > 0.0)) throw PreconditionError("time_steps: dt must be positive");
  const int n = std::max(1, static_cast<int>(std::ceil(T / dt - 1e-9)));
  return {n, T / n};
}

TransportTrajectory transport_solve(const ScalarField& rho0, const VelocityProvider& velocity,
                                    const TransportParams& params, double T) {
  const auto [steps, dt] = time_steps(T, params.dt);
  TransportParams p = params;
  p.dt = dt;
  TransportTrajectory traj;
  auto record = [&traj](double t, ScalarField rho) {
    traj.times.push_back(t);
    traj.min.push_back(rho.min());
    traj.max.push_back(rho.max());
    traj.mass.push_back(integral_domain(rho));
    traj.grad_linf.push_back(grad_linf(rho));
    traj.rho.push_back(std::move(rho));
  };
  record(0.0, rho0);
  for (int n = 0; n < steps; ++n) {
    const double t = n * dt;
    const auto [u, w] = velocity(n, t);
    ScalarField next = transport_step(traj.rho.back(), u, w, p);
    const double lo = traj.min.back();
    const double hi = traj.max.back();
    if (next.min() < lo - 1e-12 || next.max() > hi + 1e-12) {
      std::ostringstream os;
      os << "transport_solve: maximum principle violated at step " << n;
      throw SolverError(os.str());
    }
    record((n + 1) * dt, std::move(next));
  }
  return traj;
}

DensityGrowthReport density_growth_check(const TransportTrajectory& traj,
                                         std::span<const double> velocity_h3) {
  if (velocity_h3.size() < traj.times.size()) {
    throw PreconditionError("density_growth_check: velocity norm series is too short");
  }
  DensityGrowthReport r;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const ScalarField& rho0 = traj.rho.front();
  const double g0 = grad_linf(rho0);
  const double h0 = g0 + hessian_l2(rho0);
  double integral = 0.0;
  r.c_grad.push_back(nan);
  r.c_hess.push_back(nan);
  r.c_grad_max = 0.0;
  r.c_hess_max = 0.0;
  for (std::size_t n = 1; n < traj.times.size(); ++n) {
    integral += velocity_h3[n - 1] * (traj.times[n] - traj.times[n - 1]);
    if (integral < 1e-12 || g0 <= 0.0) {
      r.c_grad.push_back(nan);
      r.c_hess.push_back(nan);
      continue;
    }
    const double cg = std::log(grad_linf(traj.rho[n]) / g0) / integral;
    const double ch = std::log(hessian_l2(traj.rho[n]) / h0) / integral;
    r.c_grad.push_back(cg);
    r.c_hess.push_back(ch);
    if (r.degenerate) {
      r.c_grad_max = cg;
      r.c_hess_max = ch;
      r.degenerate = false;
    } else {
      r.c_grad_max = std::max(r.c_grad_max, cg);
      r.c_hess_max = std::max(r.c_hess_max, ch);
    }
  }
  return r;
}

}  // namespace hydrostat
