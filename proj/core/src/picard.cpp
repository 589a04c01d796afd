#include "hydrostat/picard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hydrostat/errors.hpp"
#include "hydrostat/norms.hpp"
#include "hydrostat/transport.hpp"

namespace hydrostat {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double weighted_l2(const ScalarField& rho, const ScalarField& a) {
  const Grid& g = a.grid();
  double s = 0.0;
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 0; j <= g.ny(); ++j) s += quadrature_weight(g, j) * rho(i, j) * a(i, j) * a(i, j);
  }
  return std::sqrt(std::max(s, 0.0));
}

ScalarField difference(const ScalarField& a, const ScalarField& b) {
  ScalarField d = a - b;
  d.set_bc(BoundaryY::free);
  return d;
}

// f - u_t - u u_x - w u_y
ScalarField material_residual(const ScalarField& f, const ScalarField& u, const ScalarField& ut) {
  const ScalarField ux = dx(u);
  const ScalarField uy = dy(u);
  const ScalarField w = vertical_velocity(u);
  const Grid& g = u.grid();
  ScalarField r(g, BoundaryY::free);
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 0; j <= g.ny(); ++j) {
      r(i, j) = f(i, j) - ut(i, j) - u(i, j) * ux(i, j) - w(i, j) * uy(i, j);
    }
  }
  return r;
}

}  // namespace

void PicardConfig::validate() const {
  auto fail = [](const char* what) { throw PreconditionError(std::string("PicardConfig: ") + what); };
  if (!(T > 0.0)) fail("T must be positive");
  if (!(dt > 0.0)) fail("dt must be positive");
  if (!(tol > 0.0)) fail("tol must be positive");
  if (max_iters < 2) fail("max_iters must be at least 2");
  if (!(delta >= 0.0)) fail("delta must be >= 0");
  if (!(lambda >= 0.0)) fail("lambda must be >= 0");
  if (!(vacuum_eps > 0.0)) fail("vacuum_eps must be positive");
}

PicardResult picard_iterate(const ScalarField& rho0, const ScalarField& u0, const Forcing& f,
                            const PicardConfig& cfg) {
  cfg.validate();
  const Grid& g = rho0.grid();
  if (!(u0.grid() == g)) throw PreconditionError("picard_iterate: grid mismatch");
  rho0.check_valid("picard_iterate: rho0");
  u0.check_valid("picard_iterate: u0");
  if (rho0.min() < cfg.delta - 1e-14) {
    throw PreconditionError("picard_iterate: rho0 is below the density floor");
  }
  if (u0.bc() != BoundaryY::dirichlet_zero) {
    throw PreconditionError("picard_iterate: u0 must vanish at the walls");
  }
  if (constraint_residual(u0) > 1e-9) {
    throw PreconditionError("picard_iterate: u0 violates the depth-integrated constraint");
  }

  const auto [steps, h] = time_steps(cfg.T, cfg.dt);
  const std::size_t levels = static_cast<std::size_t>(steps) + 1;
  const FaceAverage avg = cfg.momentum.stokes.face_average;

  PicardResult res;
  const ScalarField f0 = f.at(0.0);
  const PressureProfile P0 =
      compute_initial_pressure(rho0, u0, f0, cfg.law, cfg.vacuum_eps, avg);
  res.compatibility = compatibility_v1(rho0, u0, P0, f0, cfg.law, cfg.vacuum_eps, avg);

  std::vector<ScalarField> u_prev;
  if (cfg.warm_start) {
    if (cfg.warm_start->size() != levels) {
      throw PreconditionError("picard_iterate: warm start has the wrong number of time levels");
    }
    u_prev = *cfg.warm_start;
  } else {
    u_prev.assign(levels, ScalarField(g, BoundaryY::dirichlet_zero));
  }
  std::vector<ScalarField> rho_prev(levels, rho0);
  std::vector<double> phi_K(levels, 0.0);
  std::vector<ScalarField> forcing;
  forcing.reserve(levels);
  for (std::size_t m = 0; m < levels; ++m) forcing.push_back(f.at(static_cast<double>(m) * h));

  const TransportParams tp{cfg.lambda, h, true};
  for (int k = 1; k <= cfg.max_iters; ++k) {
    TransportTrajectory rt = transport_solve(
        rho0,
        [&u_prev](int n, double) {
          const ScalarField& v = u_prev[static_cast<std::size_t>(n)];
          return std::make_pair(v, vertical_velocity(v));
        },
        tp, cfg.T);
    MomentumTrajectory mt =
        momentum_solve(rt.rho, u_prev, u0, f, cfg.law, h, cfg.T, cfg.momentum, P0);

    IterateDiagnostics d;
    d.k = k;
    d.ratio = kNaN;
    double grad_eta_int = 0.0;
    double bk_int = 0.0;
    for (std::size_t m = 0; m < levels; ++m) {
      const ScalarField& rho = rt.rho[m];
      const ScalarField& u = mt.u[m];
      const double sigma = lp_norm(difference(rho, rho_prev[m]), 2.0);
      const ScalarField eta = difference(u, u_prev[m]);
      const double eta_l2 = lp_norm(eta, 2.0);
      const double eta_w = weighted_l2(rho, eta);
      d.sigma_series.push_back(sigma);
      d.eta_weighted_series.push_back(eta_w);
      d.sigma_l2 = std::max(d.sigma_l2, sigma);
      d.eta_l2 = std::max(d.eta_l2, eta_l2);
      d.eta_weighted = std::max(d.eta_weighted, eta_w);

      double grad_ut = 0.0;
      if (m > 0) {
        const double ge = grad_l2(eta);
        grad_eta_int += h * ge * ge;
        ScalarField ut = difference(u, mt.u[m - 1]);
        ut *= 1.0 / h;
        grad_ut = grad_l2(ut);
        const double bm = aniso_norm(material_residual(forcing[m], u, ut), NormExponent::infinity,
                                     NormExponent::two);
        const double gu = grad_linf(u);
        bk_int += h * (bm * bm + gu * gu);
      }
      d.lambda_rho_xx = std::max(d.lambda_rho_xx, cfg.lambda * lp_norm(dxx(rho), 2.0));

      const double phi = phi_functional(rho, u);
      const double w1 = grad_linf(rho) + hessian_linf(rho);
      const double hl = hessian_l2(rho);
      const double tl = third_derivative_l2(rho);
      const double h1 = std::sqrt(hl * hl + tl * tl);
      PhiIngredients& pk = d.phi_k;
      pk.phi = std::max(pk.phi, phi);
      pk.grad_ut_l2 = std::max(pk.grad_ut_l2, grad_ut);
      pk.grad_rho_w1inf = std::max(pk.grad_rho_w1inf, w1);
      pk.hess_rho_h1 = std::max(pk.hess_rho_h1, h1);
      phi_K[m] = std::max(phi_K[m], phi + grad_ut + w1 + h1);
      pk.phi_K = std::max(pk.phi_K, phi_K[m]);
    }
    d.phi_K_series = phi_K;
    d.eta_grad_l2_int = grad_eta_int;
    d.bk_integral = bk_int;
    if (!res.diagnostics.empty()) {
      const double prev = res.diagnostics.back().eta_weighted;
      d.ratio = prev > 0.0 ? d.eta_weighted / prev : kNaN;
    }
    const bool done = d.eta_l2 < cfg.tol;
    res.diagnostics.push_back(std::move(d));
    res.iterations = k;

    res.times = mt.times;
    res.energy_bound_constant = mt.energy_bound_constant;
    res.reports = std::move(mt.reports);
    res.P = std::move(mt.P);
    rho_prev = rt.rho;
    u_prev = mt.u;
    res.rho = std::move(rt.rho);
    res.u = std::move(mt.u);
    if (done) {
      res.converged = true;
      break;
    }
  }
  res.phi_series.clear();
  for (std::size_t m = 0; m < res.times.size(); ++m) {
    res.phi_series.push_back(phi_functional(res.rho[m], res.u[m]));
  }
  return res;
}

ContractionReport contraction_report(std::span<const double> eta) {
  std::size_t n = 0;
  while (n < eta.size() && eta[n] > 0.0 && std::isfinite(eta[n])) ++n;
  if (n < 4) throw PreconditionError("contraction_report: at least 4 positive iterates required");

  ContractionReport r;
  for (std::size_t i = 1; i < n; ++i) r.ratios.push_back(eta[i] / eta[i - 1]);
  // ratios[i] is ratio(k = i + 2); burn-in keeps k >= 3.
  double worst = 0.0;
  for (std::size_t i = 1; i < r.ratios.size(); ++i) worst = std::max(worst, r.ratios[i]);
  r.r = worst;
  r.geometric = worst < 1.0;
  r.monotone = true;
  r.super_geometric = true;
  for (std::size_t i = 2; i < r.ratios.size(); ++i) {
    if (r.ratios[i] > r.ratios[i - 1]) r.monotone = false;
    if (r.ratios[i] >= r.ratios[i - 1]) r.super_geometric = false;
  }
  if (r.ratios.size() < 3) r.super_geometric = false;

  // y = log eta_k + log (k-1)! = log C + (k-1) log T0
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i);
    ys[i] = std::log(eta[i]) + std::lgamma(x + 1.0);
    sx += x;
    sy += ys[i];
    sxx += x * x;
    sxy += x * ys[i];
  }
  const double nn = static_cast<double>(n);
  const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / nn;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ys[i] - (icpt + slope * static_cast<double>(i));
    ss += e * e;
  }
  r.fit_C = std::exp(icpt);
  r.fit_T0 = std::exp(slope);
  r.fit_residual = std::sqrt(ss / nn);
  return r;
}

ContractionReport contraction_report(const std::vector<IterateDiagnostics>& diags) {
  std::vector<double> eta;
  for (const auto& d : diags) eta.push_back(d.eta_weighted);
  return contraction_report(eta);
}

SigmaBoundReport sigma_bound_check(const std::vector<IterateDiagnostics>& diags,
                                   std::span<const double> times) {
  if (diags.size() < 2) throw PreconditionError("sigma_bound_check: at least 2 iterates required");
  SigmaBoundReport r;
  for (std::size_t idx = 1; idx < diags.size(); ++idx) {
    const IterateDiagnostics& next = diags[idx];
    const IterateDiagnostics& cur = diags[idx - 1];
    if (next.sigma_series.size() != times.size() || cur.eta_weighted_series.size() != times.size()) {
      throw PreconditionError("sigma_bound_check: series length does not match the time grid");
    }
    double den = 0.0;
    double c = 0.0;
    for (std::size_t m = 1; m < times.size(); ++m) {
      const double e = cur.eta_weighted_series[m];
      den += (times[m] - times[m - 1]) * e * e;
      if (den > 0.0) c = std::max(c, next.sigma_series[m] * next.sigma_series[m] / den);
    }
    const bool degenerate = cur.eta_weighted < 1e-12 || !(den > 0.0);
    r.c_sigma.push_back(degenerate ? kNaN : c);
    r.degenerate.push_back(degenerate);
  }
  double lo = kInfinity, hi = 0.0;
  for (std::size_t i = 0; i < r.c_sigma.size(); ++i) {
    const std::size_t k = i + 1;
    if (k < 2 || k > 6 || r.degenerate[i]) continue;
    lo = std::min(lo, r.c_sigma[i]);
    hi = std::max(hi, r.c_sigma[i]);
  }
  r.variation = hi >= lo && lo > 0.0 ? hi / lo : kNaN;
  return r;
}

ScalarField mollify_density(const ScalarField& rho0, double delta, int sweeps) {
  if (!(delta >= 0.0)) throw PreconditionError("mollify_density: delta must be >= 0");
  if (sweeps < 0) throw PreconditionError("mollify_density: sweeps must be >= 0");
  rho0.check_valid("mollify_density");
  if (rho0.min() < 0.0) throw PreconditionError("mollify_density: negative density");
  const Grid& g = rho0.grid();
  ScalarField r(g, BoundaryY::free);
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 0; j <= g.ny(); ++j) r(i, j) = std::max(rho0(i, j), delta);
  }
  // lambda dt = hx^2/4 gives the (1/4, 1/2, 1/4) filter.
  const ScalarField zero(g, BoundaryY::free);
  const TransportParams p{0.25 * g.hx() * g.hx(), 1.0, true};
  for (int s = 0; s < sweeps; ++s) r = transport_step(r, zero, zero, p);
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 0; j <= g.ny(); ++j) r(i, j) = std::min(r(i, j), rho0(i, j) + 1.0);
  }
  return r;
}

ContinuationTable two_level_continuation(const ScalarField& rho0_raw, const ScalarField& u0,
                                         const Forcing& f, const PicardConfig& cfg,
                                         std::span<const double> deltas,
                                         std::span<const double> lambdas, int mollify_sweeps,
                                         bool warm_start) {
  if (deltas.empty() || lambdas.empty()) {
    throw PreconditionError("two_level_continuation: empty parameter list");
  }
  const std::size_t n = std::max(deltas.size(), lambdas.size());
  if ((deltas.size() != n && deltas.size() != 1) || (lambdas.size() != n && lambdas.size() != 1)) {
    throw PreconditionError("two_level_continuation: delta and lambda lists differ in length");
  }
  auto at = [](std::span<const double> v, std::size_t l) { return v.size() == 1 ? v[0] : v[l]; };
  for (std::size_t l = 1; l < n; ++l) {
    if (at(deltas, l) > at(deltas, l - 1) || at(lambdas, l) > at(lambdas, l - 1)) {
      throw PreconditionError("two_level_continuation: parameter lists must be decreasing");
    }
  }

  ContinuationTable table;
  std::vector<ScalarField> u_last;
  for (std::size_t l = 0; l < n; ++l) {
    PicardConfig c = cfg;
    c.delta = at(deltas, l);
    c.lambda = at(lambdas, l);
    if (warm_start && !u_last.empty()) c.warm_start = u_last;
    const ScalarField rho = mollify_density(rho0_raw, c.delta, mollify_sweeps);
    PicardResult res = picard_iterate(rho, u0, f, c);

    ContinuationLevel lev;
    lev.delta = c.delta;
    lev.lambda = c.lambda;
    lev.converged = res.converged;
    lev.iterations = res.iterations;
    lev.phi_series = res.phi_series;
    lev.phi_max = *std::max_element(res.phi_series.begin(), res.phi_series.end());
    lev.diff_prev = kNaN;
    if (!u_last.empty()) {
      double diff = 0.0;
      for (std::size_t m = 0; m < res.u.size(); ++m) {
        diff = std::max(diff, lp_norm(difference(res.u[m], u_last[m]), 2.0));
      }
      lev.diff_prev = diff;
    }
    table.times = res.times;
    table.levels.push_back(std::move(lev));
    if (!res.converged) {
      table.complete = false;
      break;
    }
    u_last = std::move(res.u);
  }
  table.monotone = table.complete;
  for (std::size_t l = 2; l < table.levels.size(); ++l) {
    if (!(table.levels[l].diff_prev < table.levels[l - 1].diff_prev)) table.monotone = false;
  }
  return table;
}

StabilityReport stability_experiment(const ScalarField& rho0_a, const ScalarField& u0_a,
                                     const ScalarField& rho0_b, const ScalarField& u0_b,
                                     const Forcing& f, const PicardConfig& cfg) {
  const PicardResult a = picard_iterate(rho0_a, u0_a, f, cfg);
  const PicardResult b = picard_iterate(rho0_b, u0_b, f, cfg);
  if (!a.converged || !b.converged) {
    std::ostringstream os;
    os << "stability_experiment: run " << (a.converged ? "b" : "a") << " did not converge";
    throw SolverError(os.str());
  }
  StabilityReport r;
  r.epsilon = lp_norm(difference(u0_a, u0_b), 2.0) + lp_norm(difference(rho0_a, rho0_b), 2.0);
  r.times = a.times;
  const double h = a.times.size() > 1 ? a.times[1] - a.times[0] : 0.0;
  double G = 0.0;
  r.c = kNaN;
  for (std::size_t m = 0; m < a.times.size(); ++m) {
    const double dr = lp_norm(difference(a.rho[m], b.rho[m]), 2.0);
    const double du = weighted_l2(a.rho[m], difference(a.u[m], b.u[m]));
    const double E = dr * dr + du * du;
    r.E.push_back(E);
    r.max_E = std::max(r.max_E, E);
    if (m > 0) {
      ScalarField ut = difference(a.u[m], a.u[m - 1]);
      ut *= 1.0 / h;
      const double gf = grad_l2(difference(f.at(a.times[m]), ut));
      const double h3 = sobolev_norm(a.u[m], 3);
      G += h * (1.0 + gf * gf + h3 * h3);
    }
    r.gronwall_integral.push_back(G);
    if (m > 0 && r.E.front() > 0.0 && E > 0.0) {
      const double c = std::log(E / r.E.front()) / G;
      r.c = std::isnan(r.c) ? c : std::max(r.c, c);
    }
  }
  return r;
}

}  // namespace hydrostat
