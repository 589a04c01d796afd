#include "hydrostat/driver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <numbers>
#include <random>

#include "hydrostat/csv.hpp"
#include "hydrostat/errors.hpp"
#include "hydrostat/hstokes.hpp"
#include "hydrostat/norms.hpp"
#include "hydrostat/picard.hpp"
#include "hydrostat/presets.hpp"
#include "hydrostat/snapshot.hpp"
#include "hydrostat/transport.hpp"

namespace hydrostat {

namespace {

bool is_path(const std::string& s) {
  return s.find('/') != std::string::npos ||
         (s.size() > 4 && s.compare(s.size() - 4, 4, ".hpe") == 0);
}

std::string out_dir(const RunConfig& cfg, const RunOptions& opts) {
  const std::string dir = opts.out_dir.value_or(cfg.output.dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  return dir;
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void log_line(const RunOptions& opts, const std::string& msg) {
  if (opts.log) *opts.log << msg << '\n';
}

ScalarField load_field(const std::string& key, const std::string& source, const char* name,
                       const Grid& grid, const FieldFunction* fn, BoundaryY bc) {
  try {
    if (is_path(source)) {
      ScalarField f = read_snapshot(source).field(name);
      if (!(f.grid() == grid)) throw ConfigError(key + ": snapshot grid differs from the configured grid");
      f.set_bc(bc);
      return f;
    }
    return sample(grid, *fn, bc);
  } catch (const PreconditionError& e) {
    throw ConfigError(key + ": " + e.what());
  } catch (const IoError& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

std::string step_name(const char* stem, std::size_t n) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%06zu.hpe", stem, n);
  return buf;
}

ScalarField mollified(const RunConfig& cfg, const ScalarField& raw) {
  return cfg.params.delta > 0.0 ? mollify_density(raw, cfg.params.delta, cfg.params.mollify_sweeps)
                                : raw;
}

}  // namespace

InitialData build_initial_data(const RunConfig& cfg, std::uint64_t seed) {
  InitialData d;
  d.grid = make_grid(cfg.grid.L, cfg.grid.Nx, cfg.grid.Ny);
  d.law = cfg.make_law();
  const double mu_ref = d.law(1.0);
  const double L = cfg.grid.L;

  auto fn_of = [&](const std::string& src, PresetComponent c) -> std::optional<FieldFunction> {
    if (is_path(src)) return std::nullopt;
    const PresetData p = preset_catalog(src, L, mu_ref);
    switch (c) {
      case PresetComponent::density:
        return p.density;
      case PresetComponent::velocity:
        return p.velocity;
      case PresetComponent::forcing:
        return p.forcing;
    }
    return std::nullopt;
  };

  const auto rho_fn = fn_of(cfg.initial.density, PresetComponent::density);
  d.rho0 = load_field("initial.density", cfg.initial.density, "rho", d.grid,
                      rho_fn ? &*rho_fn : nullptr, BoundaryY::free);
  if (cfg.initial.noise > 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (double& v : d.rho0.values()) v += cfg.initial.noise * unit(rng);
  }
  if (d.rho0.min() < 0.0) throw ConfigError("initial.density: negative density");

  const auto u_fn = fn_of(cfg.initial.velocity, PresetComponent::velocity);
  d.u0 = load_field("initial.velocity", cfg.initial.velocity, "u", d.grid, u_fn ? &*u_fn : nullptr,
                    BoundaryY::dirichlet_zero);

  const auto f_fn = fn_of(cfg.forcing.preset, PresetComponent::forcing);
  ScalarField shape = load_field("forcing.preset", cfg.forcing.preset, "f", d.grid,
                                 f_fn ? &*f_fn : nullptr, BoundaryY::free);
  d.forcing = Forcing(std::move(shape), cfg.forcing_profile(), cfg.forcing.period);
  return d;
}

double default_time_step(const RunConfig& cfg, const ScalarField& u0, double lambda) {
  if (cfg.time.dt) return *cfg.time.dt;
  const Grid& g = u0.grid();
  const double U = std::max(1.0, u0.max_abs());
  const double W = std::max(1.0, vertical_velocity(u0).max_abs());
  return cfg.time.cfl / (U / g.hx() + W / g.hy() + 2.0 * lambda / (g.hx() * g.hx()));
}

int run_solve(const RunConfig& cfg, const RunOptions& opts) {
  const InitialData d = build_initial_data(cfg, opts.seed);
  const ScalarField rho0 = mollified(cfg, d.rho0);
  const double dt = default_time_step(cfg, d.u0, cfg.params.lambda);
  const PicardResult res = picard_iterate(rho0, d.u0, d.forcing, cfg.picard_config(dt));
  const std::string dir = out_dir(cfg, opts);

  const std::size_t levels = res.times.size();
  const double h = levels > 1 ? res.times[1] - res.times[0] : 0.0;
  std::vector<NormSnapshot> snaps;
  PhiSeries series;
  double accumulated = 0.0;
  for (std::size_t m = 0; m < levels; ++m) {
    ScalarField ut = res.compatibility.V1;
    if (m > 0) {
      ut = res.u[m] - res.u[m - 1];
      ut *= 1.0 / h;
    }
    NormSnapshot s = make_snapshot(res.times[m], res.rho[m], res.u[m], ut, res.P[m]);
    if (m > 0) {
      const MomentumStepReport& r = res.reports[m - 1];
      s.energy_residual = std::abs(r.energy_lhs - r.energy_rhs);
      const double a = sobolev_norm(ut, 1);
      const double b = sobolev_norm(res.u[m], 3);
      const double c = sobolev_norm(res.P[m], 2);
      accumulated += h * (a * a + b * b + c * c);
    }
    series.append(res.times[m], phi_functional(res.rho[m], res.u[m]), j_functional(s, accumulated));
    snaps.push_back(s);
  }

  const auto breach = blowup_monitor(series, cfg.monitor.threshold);
  const std::size_t end = breach ? breach->index + 1 : levels;
  PhiSeries kept;
  for (std::size_t m = 0; m < end; ++m) kept.append(series.times[m], series.phi[m], series.j[m]);
  emit_norm_csv(join(dir, "norms.csv"), std::span(snaps).first(end), &kept);
  emit_diagnostics_csv(join(dir, "picard_diagnostics.csv"), res.diagnostics);

  for (std::size_t m = 0; m < end; ++m) {
    const bool due = cfg.output.cadence > 0 && m % static_cast<std::size_t>(cfg.output.cadence) == 0;
    if (!due && m + 1 != end) continue;
    Snapshot snap(d.grid, res.times[m]);
    snap.add("rho", res.rho[m]);
    snap.add("u", res.u[m]);
    snap.add("w", vertical_velocity(res.u[m]));
    snap.add("P", res.P[m]);
    write_snapshot(join(dir, step_name("snapshot", m)), snap);
  }

  if (breach) {
    CsvWriter w(join(dir, "blowup.csv"), {"index", "t", "phi", "threshold"});
    w.row(std::vector<std::string>{std::to_string(breach->index), format_real(breach->t),
                                   format_real(breach->phi), format_real(cfg.monitor.threshold)});
    w.close();
    log_line(opts, "solve: blow-up threshold reached at step " + std::to_string(breach->index));
    return kExitBlowup;
  }
  if (!res.converged) {
    log_line(opts, "solve: Picard iteration did not converge in " + std::to_string(res.iterations) +
                       " iterates");
    return kExitNotConverged;
  }
  log_line(opts, "solve: converged in " + std::to_string(res.iterations) + " iterates, " +
                     std::to_string(levels - 1) + " steps; outputs in " + dir);
  return kExitOk;
}

int run_stokes(const RunConfig& cfg, const RunOptions& opts) {
  const MmsCase mms = mms_case_by_name(cfg.mms.case_name);
  const Grid g = make_grid(mms.length, cfg.grid.Nx, cfg.grid.Ny);
  const ScalarField rho = sample(g, mms.rho, BoundaryY::free);
  const ScalarField f = mms_forcing(mms, g);
  const StokesOperator op = StokesOperator::assemble(mms.law, rho, std::nullopt, cfg.stokes_options());
  const HStokesSolution sol = op.solve(f);
  const ScalarField u_exact = sample(g, mms.u, BoundaryY::dirichlet_zero);
  PressureProfile p_exact = sample_profile(g, mms.p);
  p_exact.project_mean_zero();
  PressureProfile dp = sol.P;
  for (int i = 0; i < g.nx(); ++i) dp[i] -= p_exact[i];

  const ScalarField mu = mms.law.evaluate(rho);
  const double lhs = dirichlet_form(mu, sol.u, op.options().face_average);
  const double rhs = integral_domain(f * sol.u);
  const double energy = std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);

  const std::string dir = out_dir(cfg, opts);
  Snapshot snap(g, 0.0);
  snap.add("u", sol.u);
  snap.add("P", sol.P);
  snap.add("f", f);
  snap.add("u_exact", u_exact);
  write_snapshot(join(dir, "stokes.hpe"), snap);
  CsvWriter w(join(dir, "stokes.csv"), {"nx", "ny", "u_l2_error", "p_l2_error", "constraint_residual",
                                        "linsolve_residual", "energy_residual", "iterations"});
  w.row(std::vector<std::string>{std::to_string(g.nx()), std::to_string(g.ny()),
                                 format_real(lp_norm(sol.u - u_exact, 2.0)),
                                 format_real(lp_norm(dp, 2.0)), format_real(sol.constraint_residual),
                                 format_real(sol.linsolve_residual), format_real(energy),
                                 std::to_string(sol.iterations)});
  w.close();
  log_line(opts, "stokes: solved " + mms.name + " case; outputs in " + dir);
  return kExitOk;
}

int run_transport(const RunConfig& cfg, const RunOptions& opts) {
  const InitialData d = build_initial_data(cfg, opts.seed);
  const Grid& g = d.grid;
  const ScalarField rho0 = mollified(cfg, d.rho0);
  const double speed = cfg.transport.speed;
  const double k = 2.0 * std::numbers::pi / g.length();

  ScalarField u(g, BoundaryY::free);
  ScalarField w(g, BoundaryY::free);
  const std::string& kind = cfg.transport.velocity;
  if (kind == "uniform") {
    u = ScalarField(g, BoundaryY::free, speed);
  } else if (kind == "swirl") {
    u = sample(g, [&](double x, double y) { return speed * std::cos(k * x) * std::sin(2.0 * std::numbers::pi * y); },
               BoundaryY::dirichlet_zero);
    w = vertical_velocity(u);
  } else if (kind != "none") {
    const PresetData p = preset_catalog(kind, g.length(), d.law(1.0));
    u = speed * sample(g, *p.velocity, BoundaryY::dirichlet_zero);
    w = vertical_velocity(u);
  }

  double dt = 0.0;
  if (cfg.time.dt) {
    dt = *cfg.time.dt;
  } else {
    const double c = transport_courant(u, w, cfg.params.lambda, 1.0);
    dt = c > 0.0 ? cfg.time.cfl / c : cfg.time.T;
  }
  const TransportTrajectory tr = transport_solve(
      rho0, [&](int, double) { return std::make_pair(u, w); },
      TransportParams{cfg.params.lambda, dt, true}, cfg.time.T);

  const std::string dir = out_dir(cfg, opts);
  CsvWriter csv(join(dir, "transport.csv"), {"t", "min_rho", "max_rho", "mass", "grad_linf"});
  for (std::size_t n = 0; n < tr.times.size(); ++n) {
    csv.row(std::vector<double>{tr.times[n], tr.min[n], tr.max[n], tr.mass[n], tr.grad_linf[n]});
  }
  csv.close();
  for (std::size_t n = 0; n < tr.times.size(); ++n) {
    const bool due = cfg.output.cadence > 0 && n % static_cast<std::size_t>(cfg.output.cadence) == 0;
    if (!due && n + 1 != tr.times.size()) continue;
    Snapshot snap(g, tr.times[n]);
    snap.add("rho", tr.rho[n]);
    write_snapshot(join(dir, step_name("transport", n)), snap);
  }
  log_line(opts, "transport: " + std::to_string(tr.times.size() - 1) + " steps; outputs in " + dir);
  return kExitOk;
}

int run_picard_diagnose(const RunConfig& cfg, const RunOptions& opts) {
  const InitialData d = build_initial_data(cfg, opts.seed);
  const ScalarField rho0 = mollified(cfg, d.rho0);
  const double dt = default_time_step(cfg, d.u0, cfg.params.lambda);
  const PicardResult res = picard_iterate(rho0, d.u0, d.forcing, cfg.picard_config(dt));
  const std::string dir = out_dir(cfg, opts);
  emit_diagnostics_csv(join(dir, "picard_diagnostics.csv"), res.diagnostics);

  std::vector<double> eta;
  for (const auto& it : res.diagnostics) eta.push_back(it.eta_weighted);
  if (std::count_if(eta.begin(), eta.end(), [](double e) { return e > 0.0; }) >= 4) {
    const ContractionReport cr = contraction_report(res.diagnostics);
    CsvWriter w(join(dir, "contraction.csv"),
                {"geometric", "r", "monotone", "super_geometric", "fit_C", "fit_T0", "fit_residual"});
    w.row(std::vector<std::string>{cr.geometric ? "1" : "0", format_real(cr.r), cr.monotone ? "1" : "0",
                                   cr.super_geometric ? "1" : "0", format_real(cr.fit_C),
                                   format_real(cr.fit_T0), format_real(cr.fit_residual)});
    w.close();
  }
  if (res.diagnostics.size() >= 2) {
    const SigmaBoundReport sb = sigma_bound_check(res.diagnostics, res.times);
    CsvWriter w(join(dir, "sigma_bound.csv"), {"k", "c_sigma", "degenerate"});
    for (std::size_t i = 0; i < sb.c_sigma.size(); ++i) {
      w.row(std::vector<std::string>{std::to_string(i + 1), format_real(sb.c_sigma[i]),
                                     sb.degenerate[i] ? "1" : "0"});
    }
    w.close();
  }
  if (!res.converged) {
    log_line(opts, "picard-diagnose: no convergence in " + std::to_string(res.iterations) + " iterates");
    return kExitNotConverged;
  }
  log_line(opts, "picard-diagnose: converged in " + std::to_string(res.iterations) + " iterates");
  return kExitOk;
}

int run_sweep(const RunConfig& cfg, const RunOptions& opts) {
  const InitialData d = build_initial_data(cfg, opts.seed);
  const double lam = *std::max_element(cfg.sweep.lambdas.begin(), cfg.sweep.lambdas.end());
  const double dt = default_time_step(cfg, d.u0, lam);
  const ContinuationTable t =
      two_level_continuation(d.rho0, d.u0, d.forcing, cfg.picard_config(dt), cfg.sweep.deltas,
                             cfg.sweep.lambdas, cfg.params.mollify_sweeps, cfg.solver.warm_start);
  const std::string dir = out_dir(cfg, opts);
  CsvWriter w(join(dir, "sweep.csv"),
              {"level", "delta", "lambda", "converged", "iterations", "diff_prev", "phi_max"});
  for (std::size_t l = 0; l < t.levels.size(); ++l) {
    const ContinuationLevel& v = t.levels[l];
    w.row(std::vector<std::string>{std::to_string(l), format_real(v.delta), format_real(v.lambda),
                                   v.converged ? "1" : "0", std::to_string(v.iterations),
                                   format_real(v.diff_prev), format_real(v.phi_max)});
  }
  w.close();

  std::vector<std::string> header{"t"};
  for (std::size_t l = 0; l < t.levels.size(); ++l) header.push_back("phi_" + std::to_string(l));
  CsvWriter p(join(dir, "sweep_phi.csv"), header);
  for (std::size_t m = 0; m < t.times.size(); ++m) {
    std::vector<double> row{t.times[m]};
    for (const auto& v : t.levels) row.push_back(v.phi_series[m]);
    p.row(row);
  }
  p.close();
  if (!t.complete) {
    log_line(opts, "sweep: a level did not converge; table is partial");
    return kExitNotConverged;
  }
  log_line(opts, std::string("sweep: ") + std::to_string(t.levels.size()) + " levels, differences " +
                     (t.monotone ? "decreasing" : "not decreasing"));
  return kExitOk;
}

int run_mms(const RunConfig& cfg, const RunOptions& opts) {
  const MmsCase mms = mms_case_by_name(cfg.mms.case_name);
  const ConvergenceReport r = convergence_study(mms, cfg.mms.levels, cfg.stokes_options());
  const std::string dir = out_dir(cfg, opts);
  CsvWriter w(join(dir, "mms_levels.csv"), {"n", "h", "u_l2", "u_h1", "p_l2", "constraint_residual"});
  for (const auto& l : r.levels) {
    w.row(std::vector<std::string>{std::to_string(l.n), format_real(l.h), format_real(l.u_l2),
                                   format_real(l.u_h1), format_real(l.p_l2),
                                   format_real(l.constraint_residual)});
  }
  w.close();
  CsvWriter o(join(dir, "mms_orders.csv"), {"order_u_l2", "order_u_h1", "order_p_l2", "degenerate"});
  o.row(std::vector<std::string>{format_real(r.order_u_l2), format_real(r.order_u_h1),
                                 format_real(r.order_p_l2), r.degenerate ? "1" : "0"});
  o.close();
  log_line(opts, "mms: observed u order " + format_real(r.order_u_l2));
  return kExitOk;
}

int run_command(const std::string& command, const RunConfig& cfg, const RunOptions& opts) {
  try {
    if (command == "solve") return run_solve(cfg, opts);
    if (command == "stokes") return run_stokes(cfg, opts);
    if (command == "transport") return run_transport(cfg, opts);
    if (command == "picard-diagnose") return run_picard_diagnose(cfg, opts);
    if (command == "sweep") return run_sweep(cfg, opts);
    if (command == "mms") return run_mms(cfg, opts);
    throw ConfigError("unknown command '" + command + "'");
  } catch (const ConfigError& e) {
    log_line(opts, std::string("config error: ") + e.what());
    return kExitConfig;
  } catch (const PreconditionError& e) {
    log_line(opts, std::string("invalid input: ") + e.what());
    return kExitConfig;
  } catch (const SolverError& e) {
    log_line(opts, std::string("solver error: ") + e.what());
    return kExitNotConverged;
  } catch (const std::exception& e) {
    log_line(opts, std::string("error: ") + e.what());
    return kExitFailure;
  }
}

int run_command_file(const std::string& command, const std::string& config_path,
                     const RunOptions& opts) {
  RunConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const Error& e) {
    log_line(opts, std::string("config error: ") + e.what());
    return kExitConfig;
  }
  return run_command(command, cfg, opts);
}

}  // namespace hydrostat
