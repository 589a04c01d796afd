#pragma once

// Outer linearization iteration for the regularized system
//
//   rho_t + u rho_x + w rho_y = lambda rho_xx,
//   rho (u_t + u u_x + w u_y) + P_x - div(mu(rho) grad u) = rho f,
//
// started from u^0 = 0: rho^k is transported by u^{k-1} and u^k solves the
// momentum equation with density rho^k and advecting velocity u^{k-1}.
// Also the contraction diagnostics, the (delta, lambda) continuation and the
// two-run stability experiment built on it.

#include <optional>
#include <span>
#include <vector>

#include "hydrostat/grid_field.hpp"
#include "hydrostat/momentum.hpp"
#include "hydrostat/viscosity.hpp"

namespace hydrostat {

struct PicardConfig {
  double T = 0.1;
  double dt = 1e-3;
  /// Gate on sup_t ||u^k - u^{k-1}||_L2.
  double tol = 1e-8;
  int max_iters = 20;
  double lambda = 1e-3;
  double delta = 0.0;
  ViscosityLaw law = ViscosityLaw::constant(1.0, 1.0);
  MomentumOptions momentum;
  /// Optional replacement for u^0 = 0 (one field per time level).
  std::optional<std::vector<ScalarField>> warm_start;
  double vacuum_eps = 1e-10;

  /// Throws PreconditionError on tol <= 0, max_iters < 2, delta < 0, lambda < 0,
  /// T <= 0 or dt <= 0.
  void validate() const;
};

/// Extended functional ingredients of one iterate, each the max over time.
struct PhiIngredients {
  /// max_t Phi(rho^k, u^k)
  double phi = 0.0;
  /// max_t ||grad u_t^k||_L2
  double grad_ut_l2 = 0.0;
  /// max_t ||grad rho^k||_inf + ||hess rho^k||_inf
  double grad_rho_w1inf = 0.0;
  /// max_t (||hess rho^k||_L2^2 + ||third differences||_L2^2)^(1/2)
  double hess_rho_h1 = 0.0;
  /// max_t Phi_K(t), with Phi_K(t) the max over iterates j <= k of
  /// Phi + ||grad u_t|| + ||grad rho||_W1inf + ||hess rho||_H1 at time t.
  double phi_K = 0.0;
};

/// Differences produced by iterate k >= 1: sigma^k = rho^k - rho^{k-1}
/// (rho^0 = rho0 at all times) and eta^k = u^k - u^{k-1}.
struct IterateDiagnostics {
  int k = 0;
  /// sup_t ||sigma^k||_L2
  double sigma_l2 = 0.0;
  /// sup_t ||eta^k||_L2
  double eta_l2 = 0.0;
  /// sup_t ||sqrt(rho^k) eta^k||_L2
  double eta_weighted = 0.0;
  /// integral_0^T ||grad eta^k||_L2^2 dt
  double eta_grad_l2_int = 0.0;
  /// integral_0^T B_k dt with
  /// B_k = ||f - u_t - u u_x - w u_y||^2 (sup over y of the L2 norm in x)
  /// + ||grad u||_inf^2, for u = u^k.
  double bk_integral = 0.0;
  /// max_t lambda ||rho^k_xx||_L2, kept apart from B_k.
  double lambda_rho_xx = 0.0;
  /// eta_weighted(k) / eta_weighted(k-1); NaN for k = 1.
  double ratio = 0.0;
  PhiIngredients phi_k;

  /// Time series on the run times.
  std::vector<double> sigma_series;
  std::vector<double> eta_weighted_series;
  std::vector<double> phi_K_series;
};

struct PicardResult {
  std::vector<double> times;
  std::vector<ScalarField> rho;
  std::vector<ScalarField> u;
  std::vector<PressureProfile> P;
  std::vector<MomentumStepReport> reports;
  std::vector<IterateDiagnostics> diagnostics;
  CompatibilityData compatibility;
  bool converged = false;
  int iterations = 0;
  /// Empirical energy-bound constant of the last momentum solve.
  double energy_bound_constant = 0.0;
  /// Phi(rho, u) of the final iterate at every time level.
  std::vector<double> phi_series;
};

/// rho0 must be >= cfg.delta and u0 must satisfy the depth constraint.
/// Non-convergence within max_iters is reported through `converged`.
PicardResult picard_iterate(const ScalarField& rho0, const ScalarField& u0, const Forcing& f,
                            const PicardConfig& cfg);

struct ContractionReport {
  std::vector<double> ratios;
  /// ratio <= r < 1 for every k >= 3.
  bool geometric = false;
  double r = 0.0;
  /// Ratios strictly decreasing for k >= 3.
  bool super_geometric = false;
  /// Ratios non-increasing for k >= 3.
  bool monotone = false;
  /// Fit of log eta_k = log C + (k-1) log T0 - log (k-1)!.
  double fit_C = 0.0;
  double fit_T0 = 0.0;
  double fit_residual = 0.0;
};

/// Needs at least 4 positive entries. eta[i] belongs to iterate k = i + 1.
ContractionReport contraction_report(std::span<const double> eta);
/// Uses eta_weighted of each iterate.
ContractionReport contraction_report(const std::vector<IterateDiagnostics>& diags);

struct SigmaBoundReport {
  /// c_sigma[i] belongs to k = i + 1: sup_t ||sigma^{k+1}(t)||^2 / integral_0^t ||sqrt(rho^k) eta^k||^2.
  std::vector<double> c_sigma;
  std::vector<bool> degenerate;
  /// max / min of the non-degenerate constants with 2 <= k <= 6.
  double variation = 0.0;
};

SigmaBoundReport sigma_bound_check(const std::vector<IterateDiagnostics>& diags,
                                   std::span<const double> times);

/// max(rho0, delta) followed by `sweeps` passes of the (1/4, 1/2, 1/4) filter in
/// x, clipped to rho0 + 1. Requires rho0 >= 0.
ScalarField mollify_density(const ScalarField& rho0, double delta, int sweeps = 3);

struct ContinuationLevel {
  double delta = 0.0;
  double lambda = 0.0;
  bool converged = false;
  int iterations = 0;
  /// sup_t ||u_l - u_{l-1}||_L2; NaN on the first level.
  double diff_prev = 0.0;
  double phi_max = 0.0;
  std::vector<double> phi_series;
};

struct ContinuationTable {
  std::vector<ContinuationLevel> levels;
  std::vector<double> times;
  /// False when a level did not converge; later levels are then missing.
  bool complete = true;
  /// Successive differences strictly decreasing.
  bool monotone = false;
};

/// Levels pair deltas[l] with lambdas[l]; a length-1 list is broadcast. With
/// warm_start each level starts its iteration from the previous level's velocity.
ContinuationTable two_level_continuation(const ScalarField& rho0_raw, const ScalarField& u0,
                                         const Forcing& f, const PicardConfig& cfg,
                                         std::span<const double> deltas,
                                         std::span<const double> lambdas,
                                         int mollify_sweeps = 3, bool warm_start = false);

struct StabilityReport {
  /// ||u0_a - u0_b||_L2 + ||rho0_a - rho0_b||_L2
  double epsilon = 0.0;
  std::vector<double> times;
  /// ||rho_a - rho_b||^2 + ||sqrt(rho_a)(u_a - u_b)||^2
  std::vector<double> E;
  /// integral_0^t (1 + ||grad f - grad u_t||^2 + ||u||_H3^2) for run a.
  std::vector<double> gronwall_integral;
  /// max_t log(E(t)/E(0)) / gronwall_integral(t); NaN when E(0) = 0.
  double c = 0.0;
  double max_E = 0.0;
};

/// Throws SolverError when either run fails to converge.
StabilityReport stability_experiment(const ScalarField& rho0_a, const ScalarField& u0_a,
                                     const ScalarField& rho0_b, const ScalarField& u0_b,
                                     const Forcing& f, const PicardConfig& cfg);

}  // namespace hydrostat
