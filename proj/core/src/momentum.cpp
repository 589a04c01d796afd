#include "hydrostat/momentum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hydrostat/errors.hpp"
#include "hydrostat/norms.hpp"
#include "hydrostat/transport.hpp"

namespace hydrostat {

namespace {

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw PreconditionError(std::string(what) + ": grid mismatch");
}

// Removes the constant and (-1)^i components of a profile.
void remove_null_modes(PressureProfile& p) {
  const int nx = p.grid().nx();
  double mean = 0.0, alt = 0.0;
  for (int i = 0; i < nx; ++i) {
    mean += p[i];
    alt += (i % 2 == 0 ? 1.0 : -1.0) * p[i];
  }
  mean /= nx;
  alt /= nx;
  for (int i = 0; i < nx; ++i) p[i] -= mean + (i % 2 == 0 ? alt : -alt);
}

// sum over interior nodes of w * a * b
double weighted_inner(const ScalarField& w, const ScalarField& a, const ScalarField& b) {
  const Grid& g = a.grid();
  double s = 0.0;
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 0; j <= g.ny(); ++j) s += quadrature_weight(g, j) * w(i, j) * a(i, j) * b(i, j);
  }
  return s;
}

double grad_sq(const ScalarField& u) {
  const double n = grad_l2(u);
  return n * n;
}

}  // namespace

Forcing::Forcing(ScalarField shape, Profile profile, double period)
    : shape_(std::move(shape)), profile_(profile), period_(period) {
  if (!(period_ > 0.0)) throw PreconditionError("Forcing: period must be positive");
  shape_.check_valid("Forcing");
}

Forcing Forcing::zero(const Grid& grid) { return Forcing(ScalarField(grid, BoundaryY::free)); }

double Forcing::amplitude(double t) const {
  switch (profile_) {
    case Profile::constant:
      return 1.0;
    case Profile::ramp:
      return std::min(std::max(t, 0.0) / period_, 1.0);
    case Profile::sinusoid:
      return std::sin(2.0 * std::numbers::pi * t / period_);
  }
  return 1.0;
}

ScalarField Forcing::at(double t) const { return amplitude(t) * shape_; }

ScalarField initial_force_balance(const ScalarField& rho0, const ScalarField& u0,
                                  const ScalarField& f0, const ViscosityLaw& law,
                                  FaceAverage average) {
  require_same_grid(rho0.grid(), u0.grid(), "initial_force_balance");
  require_same_grid(rho0.grid(), f0.grid(), "initial_force_balance");
  if (u0.bc() != BoundaryY::dirichlet_zero) {
    throw PreconditionError("initial_force_balance: u0 must vanish at the walls");
  }
  const Grid& g = rho0.grid();
  const ScalarField mu = law.evaluate(rho0);
  const ScalarField ux = dx(u0);
  const ScalarField uy = dy(u0);
  const ScalarField w = vertical_velocity(u0);
  const ScalarField visc = apply_viscous(mu, u0, average);
  ScalarField b(g, BoundaryY::dirichlet_zero);
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 1; j < g.ny(); ++j) {
      const double r = rho0(i, j);
      b(i, j) = -r * u0(i, j) * ux(i, j) - r * w(i, j) * uy(i, j) - visc(i, j) + r * f0(i, j);
    }
  }
  return b;
}

PressureProfile compute_initial_pressure(const ScalarField& rho0, const ScalarField& u0,
                                         const ScalarField& f0, const ViscosityLaw& law,
                                         double eps_rho, FaceAverage average) {
  if (!(eps_rho > 0.0)) throw PreconditionError("compute_initial_pressure: eps must be positive");
  const Grid& g = rho0.grid();
  const int nx = g.nx();
  const ScalarField bal = initial_force_balance(rho0, u0, f0, law, average);

  // a(x) = integral 1/rho, b(x) = integral B/rho over the interior nodes
  // (V1 vanishes on the walls).
  std::vector<double> a(nx, 0.0), b(nx, 0.0);
  for (int i = 0; i < nx; ++i) {
    for (int j = 1; j < g.ny(); ++j) {
      const double r = std::max(rho0(i, j), eps_rho);
      a[i] += g.hy() / r;
      b[i] += g.hy() * bal(i, j) / r;
    }
  }
  // c = alpha + beta (-1)^i with (b - c)/a orthogonal to 1 and (-1)^i.
  double s11 = 0.0, s12 = 0.0, r1 = 0.0, r2 = 0.0;
  for (int i = 0; i < nx; ++i) {
    const double s = i % 2 == 0 ? 1.0 : -1.0;
    s11 += 1.0 / a[i];
    s12 += s / a[i];
    r1 += b[i] / a[i];
    r2 += s * b[i] / a[i];
  }
  const double det = s11 * s11 - s12 * s12;
  if (!(det > 0.0)) throw SolverError("compute_initial_pressure: singular compatibility system");
  const double alpha = (r1 * s11 - r2 * s12) / det;
  const double beta = (r2 * s11 - r1 * s12) / det;

  std::vector<double> gx(nx);
  for (int i = 0; i < nx; ++i) {
    const double s = i % 2 == 0 ? 1.0 : -1.0;
    gx[i] = (b[i] - alpha - beta * s) / a[i];
  }
  // (P[i+1] - P[i-1]) / (2 hx) = gx[i]: each parity class is a cumulative sum.
  PressureProfile p(g);
  for (int start = 0; start < 2; ++start) {
    for (int i = start; i + 2 < nx; i += 2) p[i + 2] = p[i] + 2.0 * g.hx() * gx[i + 1];
  }
  remove_null_modes(p);
  return p;
}

CompatibilityData compatibility_v1(const ScalarField& rho0, const ScalarField& u0,
                                   const PressureProfile& P0, const ScalarField& f0,
                                   const ViscosityLaw& law, double eps_rho, FaceAverage average) {
  if (!(eps_rho > 0.0)) throw PreconditionError("compatibility_v1: eps must be positive");
  require_same_grid(rho0.grid(), P0.grid(), "compatibility_v1");
  const Grid& g = rho0.grid();
  const ScalarField bal = initial_force_balance(rho0, u0, f0, law, average);
  const PressureProfile px = dx(P0);

  CompatibilityData out;
  out.P0 = P0;
  out.V1 = ScalarField(g, BoundaryY::dirichlet_zero);
  double res = 0.0;
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 1; j < g.ny(); ++j) {
      const double rhs = bal(i, j) - px[i];
      const double r = rho0(i, j);
      if (r < eps_rho) ++out.vacuum_nodes;
      out.V1(i, j) = rhs / std::max(r, eps_rho);
      const double d = r * out.V1(i, j) - rhs;
      res += quadrature_weight(g, j) * d * d;
    }
  }
  out.residual = std::sqrt(res);
  out.constraint_residual = constraint_residual(out.V1);
  return out;
}

MomentumStepResult momentum_step(const ScalarField& rho, const ScalarField& v,
                                 const ScalarField& u_old, const ScalarField& f,
                                 const ViscosityLaw& law, double dt,
                                 const MomentumOptions& options, const ScalarField* rho_prev) {
  if (!(dt > 0.0)) throw PreconditionError("momentum_step: dt must be positive");
  const Grid& g = rho.grid();
  require_same_grid(g, v.grid(), "momentum_step");
  require_same_grid(g, u_old.grid(), "momentum_step");
  require_same_grid(g, f.grid(), "momentum_step");
  if (u_old.bc() != BoundaryY::dirichlet_zero) {
    throw PreconditionError("momentum_step: u must vanish at the walls");
  }
  if (rho.min() < 0.0) throw PreconditionError("momentum_step: negative density");

  const ScalarField w = vertical_velocity(v);
  if (options.cfl_guard) {
    const double c = dt * (v.max_abs() / g.hx() + w.max_abs() / g.hy());
    if (c > 1.0 + 1e-12) {
      std::ostringstream os;
      os << "momentum_step: advective Courant number " << c << " > 1";
      throw PreconditionError(os.str());
    }
  }

  const ScalarField mu = law.evaluate(rho);
  const ScalarField ux = dx(u_old);
  const ScalarField uy = dy(u_old);
  ScalarField shift(g, BoundaryY::free);
  ScalarField adv(g, BoundaryY::dirichlet_zero);
  ScalarField rhs(g, BoundaryY::free);
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 0; j <= g.ny(); ++j) {
      const double r = rho(i, j);
      shift(i, j) = r / dt;
      if (j == 0 || j == g.ny()) continue;
      adv(i, j) = v(i, j) * ux(i, j) + w(i, j) * uy(i, j);
      rhs(i, j) = r * f(i, j) + r / dt * u_old(i, j) - r * adv(i, j);
    }
  }

  const StokesOperator op = StokesOperator::assemble(mu, law.floor(), shift, options.stokes);
  HStokesSolution sol = op.solve(rhs);

  ScalarField ut = sol.u - u_old;
  ut *= 1.0 / dt;
  ut.set_bc(BoundaryY::dirichlet_zero);

  const FaceAverage avg = options.stokes.face_average;
  const ScalarField mu_prev = rho_prev ? law.evaluate(*rho_prev) : mu;
  const double d_new = dirichlet_form(mu, sol.u, avg);
  const double d_old_now = dirichlet_form(mu, u_old, avg);
  const double d_old_prev = rho_prev ? dirichlet_form(mu_prev, u_old, avg) : d_old_now;

  MomentumStepReport rep;
  const double kin_ut = weighted_inner(rho, ut, ut);
  rep.sqrt_rho_ut_l2 = std::sqrt(std::max(kin_ut, 0.0));
  rep.mu_t_correction = (d_old_now - d_old_prev) / (2.0 * dt);
  rep.energy_lhs = kin_ut + (d_new - d_old_prev) / (2.0 * dt);
  rep.energy_rhs = weighted_inner(rho, f, ut) - weighted_inner(rho, adv, ut) + rep.mu_t_correction;
  rep.constraint_residual = sol.constraint_residual;
  rep.kinetic_energy = weighted_inner(rho, sol.u, sol.u);
  rep.dissipation = d_new;

  MomentumStepResult out;
  out.u = std::move(sol.u);
  out.P = std::move(sol.P);
  out.report = rep;
  return out;
}

MomentumTrajectory momentum_solve(const std::vector<ScalarField>& rho_traj,
                                  const std::vector<ScalarField>& v_traj, const ScalarField& u0,
                                  const Forcing& forcing, const ViscosityLaw& law, double dt,
                                  double T, const MomentumOptions& options,
                                  const std::optional<PressureProfile>& P0) {
  const auto [steps, h] = time_steps(T, dt);
  const std::size_t need = static_cast<std::size_t>(steps) + 1;
  if (rho_traj.size() != need || v_traj.size() != need) {
    std::ostringstream os;
    os << "momentum_solve: expected " << need << " density and velocity levels, got "
       << rho_traj.size() << " and " << v_traj.size();
    throw PreconditionError(os.str());
  }
  u0.check_valid("momentum_solve: u0");

  MomentumTrajectory tr;
  tr.times.push_back(0.0);
  tr.u.push_back(u0);
  tr.P.push_back(P0 ? *P0 : PressureProfile(u0.grid()));
  tr.sup_grad_u = std::sqrt(grad_sq(u0));

  double int_ut = 0.0;
  double int_phi8 = 0.0;
  double phi = phi_functional(rho_traj[0], u0);
  const double y0 = grad_sq(u0);
  tr.energy_bound_series.push_back(y0);
  tr.energy_bound_constant = y0;

  for (int n = 0; n < steps; ++n) {
    const double t_new = (n + 1) * h;
    const ScalarField* prev = n > 0 ? &rho_traj[n - 1] : nullptr;
    MomentumStepResult step = momentum_step(rho_traj[n], v_traj[n], tr.u.back(),
                                            forcing.at(t_new), law, h, options, prev);
    step.report.t = t_new;
    const double s = step.report.sqrt_rho_ut_l2;
    int_ut += s * s * h;
    int_phi8 += std::pow(phi, 8) * h;
    const double yn = int_ut + grad_sq(step.u);
    tr.energy_bound_series.push_back(yn);
    tr.energy_bound_constant = std::max(tr.energy_bound_constant, yn / (1.0 + int_phi8));
    tr.sup_grad_u = std::max(tr.sup_grad_u, std::sqrt(grad_sq(step.u)));
    phi = phi_functional(rho_traj[n + 1], step.u);

    tr.times.push_back(t_new);
    tr.u.push_back(std::move(step.u));
    tr.P.push_back(std::move(step.P));
    tr.reports.push_back(step.report);
  }
  tr.int_rho_ut_sq = int_ut;
  return tr;
}

}  // namespace hydrostat
