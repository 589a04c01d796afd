#include "hydrostat/hstokes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>

#include "hydrostat/errors.hpp"
#include "hydrostat/norms.hpp"

namespace hydrostat {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

namespace {

constexpr double kPi = std::numbers::pi;

double average(double a, double b, FaceAverage avg) {
  if (avg == FaceAverage::harmonic) return 2.0 * a * b / (a + b);
  return 0.5 * (a + b);
}

// Preconditioner for the Krylov path: the factorized saddle-point operator
// with mu and shift frozen at their domain means.
class FrozenCoefficientPreconditioner {
 public:
  using StorageIndex = int;
  enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic };

  FrozenCoefficientPreconditioner() = default;
  template <typename M>
  explicit FrozenCoefficientPreconditioner(const M&) {}

  void set(const Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>* lu) { lu_ = lu; }

  template <typename M>
  FrozenCoefficientPreconditioner& analyzePattern(const M&) { return *this; }
  template <typename M>
  FrozenCoefficientPreconditioner& factorize(const M&) { return *this; }
  template <typename M>
  FrozenCoefficientPreconditioner& compute(const M&) { return *this; }

  template <typename Rhs>
  Eigen::VectorXd solve(const Rhs& b) const {
    Eigen::VectorXd x = lu_->solve(b);
    return x;
  }
  Eigen::ComputationInfo info() const { return Eigen::Success; }

 private:
  const Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>* lu_ = nullptr;
};

}  // namespace

FaceViscosity face_viscosity(const ScalarField& mu, FaceAverage avg) {
  const Grid& g = mu.grid();
  const int nx = g.nx();
  const int ny = g.ny();
  FaceViscosity fv;
  fv.x_faces.resize(g.size());
  fv.y_faces.resize(static_cast<std::size_t>(nx) * ny);
  for (int i = 0; i < nx; ++i) {
    const int ip = g.wrap(i + 1);
    for (int j = 0; j <= ny; ++j) fv.x_faces[g.index(i, j)] = average(mu(i, j), mu(ip, j), avg);
    for (int j = 0; j < ny; ++j) {
      fv.y_faces[static_cast<std::size_t>(i) * ny + j] = average(mu(i, j), mu(i, j + 1), avg);
    }
  }
  return fv;
}

double dirichlet_form(const ScalarField& mu, const ScalarField& u, FaceAverage avg) {
  const Grid& g = u.grid();
  const FaceViscosity fv = face_viscosity(mu, avg);
  const int nx = g.nx();
  const int ny = g.ny();
  const double hx = g.hx();
  const double hy = g.hy();
  double acc = 0.0;
  for (int i = 0; i < nx; ++i) {
    const int ip = g.wrap(i + 1);
    // x faces carry the interior row weight hy; u vanishes on the wall rows.
    for (int j = 1; j < ny; ++j) {
      const double d = (u(ip, j) - u(i, j)) / hx;
      acc += fv.x_faces[g.index(i, j)] * d * d;
    }
    for (int j = 0; j < ny; ++j) {
      const double d = (u(i, j + 1) - u(i, j)) / hy;
      acc += fv.y_faces[static_cast<std::size_t>(i) * ny + j] * d * d;
    }
  }
  return acc * hx * hy;
}

ScalarField apply_viscous(const ScalarField& mu, const ScalarField& u, FaceAverage avg) {
  const Grid& g = u.grid();
  const FaceViscosity fv = face_viscosity(mu, avg);
  const int nx = g.nx();
  const int ny = g.ny();
  const double ihx2 = 1.0 / (g.hx() * g.hx());
  const double ihy2 = 1.0 / (g.hy() * g.hy());
  ScalarField out(g, BoundaryY::dirichlet_zero);
  for (int i = 0; i < nx; ++i) {
    const int ip = g.wrap(i + 1);
    const int im = g.wrap(i - 1);
    for (int j = 1; j < ny; ++j) {
      const double fxp = fv.x_faces[g.index(i, j)] * (u(ip, j) - u(i, j));
      const double fxm = fv.x_faces[g.index(im, j)] * (u(i, j) - u(im, j));
      const double fyp = fv.y_faces[static_cast<std::size_t>(i) * ny + j] * (u(i, j + 1) - u(i, j));
      const double fym =
          fv.y_faces[static_cast<std::size_t>(i) * ny + j - 1] * (u(i, j) - u(i, j - 1));
      out(i, j) = -(fxp - fxm) * ihx2 - (fyp - fym) * ihy2;
    }
  }
  return out;
}

double constraint_residual(const ScalarField& u) {
  const Grid& g = u.grid();
  const std::vector<double> col = column_integral(u);
  const double inv = 1.0 / (2.0 * g.hx());
  double m = 0.0;
  for (int i = 0; i < g.nx(); ++i) {
    const double d = (col[static_cast<std::size_t>(g.wrap(i + 1))] -
                      col[static_cast<std::size_t>(g.wrap(i - 1))]) * inv;
    m = std::max(m, std::abs(d));
  }
  return m;
}

// ---------------------------------------------------------------------------

struct StokesOperator::State {
  Grid grid;
  ScalarField mu;
  ScalarField shift;
  StokesOptions options;
  SparseMatrix matrix;
  int nu = 0;
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  // Iterative path only: the frozen-coefficient factorization.
  std::unique_ptr<Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>> frozen;
};

namespace {

// Momentum rows are multiplied by the cell area hx*hy (the weak form), and the
// constraint rows by hx, which keeps the matrix symmetric with O(1) entries in
// the velocity block.
SparseMatrix assemble_matrix(const ScalarField& mu, const ScalarField& shift, FaceAverage avg) {
  const Grid& g = mu.grid();
  const int nx = g.nx();
  const int ny = g.ny();
  const int nu = nx * (ny - 1);
  const int n = nu + nx;
  const double area = g.hx() * g.hy();
  const double cx = g.hy() / g.hx();
  const double cy = g.hx() / g.hy();
  const double cp = 0.5 * g.hy();
  const FaceViscosity fv = face_viscosity(mu, avg);
  auto vi = [ny](int i, int j) { return i * (ny - 1) + (j - 1); };

  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(nu) * 7 + static_cast<std::size_t>(nx) * (2 * ny + 2));
  for (int i = 0; i < nx; ++i) {
    const int ip = g.wrap(i + 1);
    const int im = g.wrap(i - 1);
    for (int j = 1; j < ny; ++j) {
      const int r = vi(i, j);
      const double mxp = fv.x_faces[g.index(i, j)];
      const double mxm = fv.x_faces[g.index(im, j)];
      const double myp = fv.y_faces[static_cast<std::size_t>(i) * ny + j];
      const double mym = fv.y_faces[static_cast<std::size_t>(i) * ny + j - 1];
      t.emplace_back(r, r, shift(i, j) * area + (mxp + mxm) * cx + (myp + mym) * cy);
      t.emplace_back(r, vi(ip, j), -mxp * cx);
      t.emplace_back(r, vi(im, j), -mxm * cx);
      if (j + 1 < ny) t.emplace_back(r, vi(i, j + 1), -myp * cy);
      if (j - 1 > 0) t.emplace_back(r, vi(i, j - 1), -mym * cy);
      t.emplace_back(r, nu + ip, cp);
      t.emplace_back(r, nu + im, -cp);
    }
  }
  // Constraint rows -hx dx(integral u dy) = 0 for i >= 2 (transpose of the
  // pressure gradient block); rows 0 and 1 carry the two pressure gauges.
  for (int m = 2; m < nx; ++m) {
    const int r = nu + m;
    const int ip = g.wrap(m + 1);
    const int im = g.wrap(m - 1);
    for (int j = 1; j < ny; ++j) {
      t.emplace_back(r, vi(ip, j), -cp);
      t.emplace_back(r, vi(im, j), cp);
    }
  }
  const double w = 1.0 / nx;
  for (int i = 0; i < nx; ++i) {
    t.emplace_back(nu, nu + i, w);
    t.emplace_back(nu + 1, nu + i, (i % 2 == 0) ? w : -w);
  }
  SparseMatrix k(n, n);
  k.setFromTriplets(t.begin(), t.end());
  k.makeCompressed();
  return k;
}

void check_mu_shift(const ScalarField& mu, double mu_floor, const ScalarField& shift) {
  if (!(mu_floor > 0.0)) throw PreconditionError("hstokes: viscosity floor must be positive");
  for (double v : mu.values()) {
    if (!(v >= mu_floor) || !std::isfinite(v)) {
      std::ostringstream os;
      os << "hstokes: viscosity " << v << " violates the floor " << mu_floor;
      throw PreconditionError(os.str());
    }
  }
  for (double v : shift.values()) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw PreconditionError("hstokes: shift must be finite and non-negative");
    }
  }
}

double domain_mean(const ScalarField& f) {
  return integral_domain(f) / f.grid().length();
}

}  // namespace

StokesOperator StokesOperator::assemble(const ScalarField& mu, double mu_floor,
                                        const std::optional<ScalarField>& shift,
                                        const StokesOptions& options) {
  const Grid& g = mu.grid();
  ScalarField s = shift ? *shift : ScalarField(g, BoundaryY::free, 0.0);
  if (!(s.grid() == g)) throw PreconditionError("hstokes: shift lives on a different grid");
  check_mu_shift(mu, mu_floor, s);

  auto state = std::make_shared<State>();
  state->grid = g;
  state->mu = mu;
  state->shift = std::move(s);
  state->options = options;
  state->nu = g.nx() * (g.ny() - 1);
  state->matrix = assemble_matrix(state->mu, state->shift, options.face_average);

  if (options.linear_solver == LinearSolverKind::direct) {
    state->lu.analyzePattern(state->matrix);
    state->lu.factorize(state->matrix);
    if (state->lu.info() != Eigen::Success) {
      throw SolverError("hstokes: sparse LU factorization failed: " + state->lu.lastErrorMessage());
    }
  } else {
    const ScalarField mu_bar(g, BoundaryY::free, domain_mean(state->mu));
    const ScalarField shift_bar(g, BoundaryY::free, domain_mean(state->shift));
    const SparseMatrix frozen = assemble_matrix(mu_bar, shift_bar, options.face_average);
    state->frozen = std::make_unique<Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>>();
    state->frozen->analyzePattern(frozen);
    state->frozen->factorize(frozen);
    if (state->frozen->info() != Eigen::Success) {
      throw SolverError("hstokes: preconditioner factorization failed");
    }
  }
  return StokesOperator(std::move(state));
}

StokesOperator StokesOperator::assemble(const ViscosityLaw& law, const ScalarField& rho,
                                        const std::optional<ScalarField>& shift,
                                        const StokesOptions& options) {
  return assemble(law.evaluate(rho), law.floor(), shift, options);
}

const Grid& StokesOperator::grid() const { return state_->grid; }
const ScalarField& StokesOperator::mu() const { return state_->mu; }
const ScalarField& StokesOperator::shift() const { return state_->shift; }
const StokesOptions& StokesOperator::options() const { return state_->options; }
const SparseMatrix& StokesOperator::matrix() const { return state_->matrix; }
int StokesOperator::velocity_unknowns() const { return state_->nu; }
int StokesOperator::velocity_index(int i, int j) const {
  return i * (state_->grid.ny() - 1) + (j - 1);
}

Eigen::VectorXd StokesOperator::rhs(const ScalarField& f) const {
  const Grid& g = state_->grid;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(state_->matrix.rows());
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 1; j < g.ny(); ++j) b[velocity_index(i, j)] = f(i, j) * g.hx() * g.hy();
  }
  return b;
}

void StokesOperator::unpack(const Eigen::VectorXd& x, ScalarField& u, PressureProfile& p) const {
  const Grid& g = state_->grid;
  u = ScalarField(g, BoundaryY::dirichlet_zero);
  p = PressureProfile(g);
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 1; j < g.ny(); ++j) u(i, j) = x[velocity_index(i, j)];
    p[i] = x[state_->nu + i];
  }
}

Eigen::VectorXd StokesOperator::pack(const ScalarField& u, const PressureProfile& p) const {
  const Grid& g = state_->grid;
  Eigen::VectorXd x(state_->matrix.rows());
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 1; j < g.ny(); ++j) x[velocity_index(i, j)] = u(i, j);
    x[state_->nu + i] = p[i];
  }
  return x;
}

double StokesOperator::uu_offdiag_to_diag_ratio() const {
  const SparseMatrix& k = state_->matrix;
  const int nu = state_->nu;
  double worst = 0.0;
  std::vector<double> diag(static_cast<std::size_t>(nu), 0.0);
  std::vector<double> off(static_cast<std::size_t>(nu), 0.0);
  for (int c = 0; c < nu; ++c) {
    for (SparseMatrix::InnerIterator it(k, c); it; ++it) {
      if (it.row() >= nu) continue;
      if (it.row() == c) {
        diag[static_cast<std::size_t>(c)] = std::abs(it.value());
      } else {
        off[static_cast<std::size_t>(it.row())] += std::abs(it.value());
      }
    }
  }
  for (int r = 0; r < nu; ++r) {
    worst = std::max(worst, off[static_cast<std::size_t>(r)] / diag[static_cast<std::size_t>(r)]);
  }
  return worst;
}

namespace {

// Removes the constant and (-1)^i components; neither is seen by the
// centered pressure gradient.
void gauge_pressure(PressureProfile& p) {
  const int nx = p.grid().nx();
  double mean = 0.0;
  double alt = 0.0;
  for (int i = 0; i < nx; ++i) {
    mean += p[i];
    alt += (i % 2 == 0) ? p[i] : -p[i];
  }
  mean /= nx;
  alt /= nx;
  for (int i = 0; i < nx; ++i) p[i] -= mean + ((i % 2 == 0) ? alt : -alt);
}

}  // namespace

HStokesSolution StokesOperator::solve(const ScalarField& f) const {
  const State& s = *state_;
  if (!(f.grid() == s.grid)) throw PreconditionError("hstokes: forcing lives on a different grid");
  for (double v : f.values()) {
    if (!std::isfinite(v)) throw PreconditionError("hstokes: forcing is not finite");
  }
  const Eigen::VectorXd b = rhs(f);
  Eigen::VectorXd x;
  int iterations = 1;
  if (s.options.linear_solver == LinearSolverKind::direct) {
    x = s.lu.solve(b);
    // Iterative refinement: the saddle-point LU loses a few digits in the
    // constraint rows on fine grids.
    double last = (b - s.matrix * x).norm();
    for (int pass = 0; pass < 4 && last > 0.0; ++pass) {
      const Eigen::VectorXd dx_corr = s.lu.solve(Eigen::VectorXd(b - s.matrix * x));
      const Eigen::VectorXd trial = x + dx_corr;
      const double r = (b - s.matrix * trial).norm();
      if (!(r < last)) break;
      x = trial;
      last = r;
    }
  } else {
    Eigen::BiCGSTAB<SparseMatrix, FrozenCoefficientPreconditioner> krylov;
    krylov.setTolerance(s.options.iterative_tol);
    krylov.setMaxIterations(s.options.iterative_max_iter);
    krylov.compute(s.matrix);
    krylov.preconditioner().set(s.frozen.get());
    x = krylov.solve(b);
    iterations = static_cast<int>(krylov.iterations());
    if (krylov.info() != Eigen::Success) {
      std::ostringstream os;
      os << "hstokes: Krylov solve did not converge (iterations " << krylov.iterations()
         << ", estimated error " << krylov.error() << ")";
      throw SolverError(os.str());
    }
  }

  HStokesSolution sol;
  unpack(x, sol.u, sol.P);
  const double bnorm = b.norm();
  const double rnorm = (s.matrix * x - b).norm();
  sol.linsolve_residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;
  sol.constraint_residual = constraint_residual(sol.u);
  sol.iterations = iterations;
  sol.P.project_mean_zero();
  sol.u.check_valid("hstokes solution");

  if (!(sol.linsolve_residual <= s.options.residual_tol)) {
    std::ostringstream os;
    os << "hstokes: linear residual " << sol.linsolve_residual << " exceeds "
       << s.options.residual_tol;
    throw SolverError(os.str());
  }
  if (!(sol.constraint_residual <= s.options.constraint_tol)) {
    std::ostringstream os;
    os << "hstokes: constraint residual " << sol.constraint_residual << " exceeds "
       << s.options.constraint_tol;
    throw SolverError(os.str());
  }
  return sol;
}

HStokesSolution solve_hstokes(const StokesOperator& op, const ScalarField& f) {
  return op.solve(f);
}

// ---------------------------------------------------------------------------

PtildeResult ptilde_fixed_point(const ScalarField& mu, double mu_floor, const ScalarField& f,
                                double tol, int max_iter, const StokesOptions& options) {
  if (!(tol > 0.0)) throw PreconditionError("ptilde_fixed_point: tol must be positive");
  if (max_iter < 1) throw PreconditionError("ptilde_fixed_point: max_iter must be >= 1");
  const Grid& g = mu.grid();
  const ScalarField zero_shift(g, BoundaryY::free, 0.0);
  check_mu_shift(mu, mu_floor, zero_shift);

  StokesOptions unit_options = options;
  unit_options.linear_solver = LinearSolverKind::direct;
  // Corrections grow without bound when the sweep diverges; the absolute
  // invariants are checked on the returned solution instead.
  unit_options.constraint_tol = kInfinity;
  unit_options.residual_tol = kInfinity;
  const StokesOperator unit =
      StokesOperator::assemble(ScalarField(g, BoundaryY::free, 1.0), 1.0, std::nullopt, unit_options);
  const SparseMatrix variable = assemble_matrix(mu, zero_shift, options.face_average);
  const std::vector<double> mu_column = column_integral(mu);

  PtildeResult out;
  ScalarField u(g, BoundaryY::dirichlet_zero);
  PressureProfile p(g);
  PressureProfile ptilde_total(g);
  const Eigen::VectorXd b = unit.rhs(f);
  const double bnorm = b.norm();

  for (int it = 1; it <= max_iter; ++it) {
    const Eigen::VectorXd r = b - variable * unit.pack(u, p);
    ScalarField scaled(g, BoundaryY::dirichlet_zero);
    for (int i = 0; i < g.nx(); ++i) {
      for (int j = 1; j < g.ny(); ++j) scaled(i, j) = r[unit.velocity_index(i, j)] / (mu(i, j) * g.hx() * g.hy());
    }
    HStokesSolution corr = unit.solve(scaled);
    u += corr.u;
    u.set_bc(BoundaryY::dirichlet_zero);
    for (int i = 0; i < g.nx(); ++i) {
      p[i] += mu_column[static_cast<std::size_t>(i)] * corr.P[i];
      ptilde_total[i] += corr.P[i];
    }
    gauge_pressure(p);
    const double update = lp_norm(corr.u, 2.0);
    out.updates.push_back(update);
    if (!std::isfinite(update) || update > 1e12) break;
    if (update < tol) {
      out.converged = true;
      break;
    }
  }

  out.solution.u = u;
  out.solution.P = p;
  out.solution.P.project_mean_zero();
  out.solution.iterations = static_cast<int>(out.updates.size()) - (out.converged ? 1 : 0);
  const Eigen::VectorXd x = unit.pack(u, p);
  const double rnorm = (b - variable * x).norm();
  out.solution.linsolve_residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;
  out.solution.constraint_residual = constraint_residual(u);

  // Gap between mu*Ptilde and its y-average, which is what P can represent.
  double gap = 0.0;
  for (int i = 0; i < g.nx(); ++i) {
    const double avg = mu_column[static_cast<std::size_t>(i)] * ptilde_total[i];
    for (int j = 0; j <= g.ny(); ++j) {
      const double d = mu(i, j) * ptilde_total[i] - avg;
      gap += quadrature_weight(g, j) * d * d;
    }
  }
  out.reconstruction_gap = std::sqrt(gap);
  return out;
}

RegularityReport regularity_check(const HStokesSolution& sol, const ScalarField& rho,
                                  const ScalarField& f) {
  RegularityReport r;
  const double f_l2 = lp_norm(f, 2.0);
  if (f_l2 == 0.0) {
    r.degenerate = true;
    return r;
  }
  const double grad = grad_linf(rho);
  r.c_h2 = (sobolev_norm(sol.u, 2) + sobolev_norm(sol.P, 1)) / ((1.0 + grad) * f_l2);
  const double f_h1 = sobolev_norm(f, 1);
  r.c_h3 = (sobolev_norm(sol.u, 3) + sobolev_norm(sol.P, 2)) /
           ((1.0 + grad + grad * grad) * (1.0 + hessian_l2(rho)) * f_h1);
  return r;
}

// ---------------------------------------------------------------------------

bool MmsCase::has_analytic_derivatives() const {
  return u_x && u_y && u_xx && u_yy && p_x && rho_x && rho_y;
}

namespace {

// Sixth-order central first derivative.
template <typename F>
double d6(const F& fn, double h) {
  return (-fn(-3.0 * h) + 9.0 * fn(-2.0 * h) - 45.0 * fn(-h) + 45.0 * fn(h) - 9.0 * fn(2.0 * h) +
          fn(3.0 * h)) /
         (60.0 * h);
}

}  // namespace

ScalarField mms_forcing(const MmsCase& mms, const Grid& grid, Differentiation mode) {
  if (!mms.u || !mms.p || !mms.rho) throw PreconditionError("mms_forcing: incomplete case");
  // Boundary and depth-integral checks on the exact velocity.
  constexpr int kPanels = 1024;
  double col_min = kInfinity;
  double col_max = -kInfinity;
  for (int i = 0; i < grid.nx(); ++i) {
    const double x = grid.x(i);
    if (std::abs(mms.u(x, 0.0)) > 1e-12 || std::abs(mms.u(x, 1.0)) > 1e-12) {
      throw PreconditionError("mms_forcing: exact velocity does not vanish at the walls");
    }
    double acc = mms.u(x, 0.0) + mms.u(x, 1.0);
    for (int k = 1; k < kPanels; ++k) acc += (k % 2 == 1 ? 4.0 : 2.0) * mms.u(x, double(k) / kPanels);
    acc /= 3.0 * kPanels;
    col_min = std::min(col_min, acc);
    col_max = std::max(col_max, acc);
  }
  if (col_max - col_min > 1e-8) {
    throw PreconditionError("mms_forcing: depth integral of the exact velocity depends on x");
  }

  const bool analytic = mode == Differentiation::analytic ||
                        (mode == Differentiation::automatic && mms.has_analytic_derivatives());
  if (mode == Differentiation::analytic && !mms.has_analytic_derivatives()) {
    throw PreconditionError("mms_forcing: analytic mode needs every derivative callback");
  }
  const ViscosityLaw& law = mms.law;
  if (analytic) {
    return sample(
        grid,
        [&](double x, double y) {
          const double r = mms.rho(x, y);
          return -law(r) * (mms.u_xx(x, y) + mms.u_yy(x, y)) -
                 law.derivative(r) * (mms.rho_x(x, y) * mms.u_x(x, y) +
                                      mms.rho_y(x, y) * mms.u_y(x, y)) +
                 mms.p_x(x);
        },
        BoundaryY::free);
  }
  const double h = std::min(grid.hx(), grid.hy()) / 8.0;
  return sample(
      grid,
      [&](double x, double y) {
        auto flux_x = [&](double xx) {
          return law(mms.rho(xx, y)) * d6([&](double s) { return mms.u(xx + s, y); }, h);
        };
        auto flux_y = [&](double yy) {
          return law(mms.rho(x, yy)) * d6([&](double s) { return mms.u(x, yy + s); }, h);
        };
        const double div = d6([&](double s) { return flux_x(x + s); }, h) +
                           d6([&](double s) { return flux_y(y + s); }, h);
        const double px = d6([&](double s) { return mms.p(x + s); }, h);
        return -div + px;
      },
      BoundaryY::free);
}

MmsCase mms_constant_mu() {
  MmsCase c;
  c.name = "constant-mu";
  const double k = 2.0 * kPi;
  c.u = [k](double x, double y) { return std::sin(k * x) * std::sin(k * y); };
  c.p = [k](double x) { return std::cos(k * x); };
  c.rho = [](double, double) { return 1.0; };
  c.law = ViscosityLaw::constant(1.0, 0.5);
  c.u_x = [k](double x, double y) { return k * std::cos(k * x) * std::sin(k * y); };
  c.u_y = [k](double x, double y) { return k * std::sin(k * x) * std::cos(k * y); };
  c.u_xx = [k](double x, double y) { return -k * k * std::sin(k * x) * std::sin(k * y); };
  c.u_yy = c.u_xx;
  c.p_x = [k](double x) { return -k * std::sin(k * x); };
  c.rho_x = [](double, double) { return 0.0; };
  c.rho_y = [](double, double) { return 0.0; };
  return c;
}

MmsCase mms_variable_mu() {
  MmsCase c = mms_constant_mu();
  c.name = "variable-mu";
  const double k = 2.0 * kPi;
  c.rho = [k](double x, double y) { return 1.0 + 0.5 * std::sin(k * x) * (1.0 - std::cos(k * y)); };
  c.rho_x = [k](double x, double y) {
    return 0.5 * k * std::cos(k * x) * (1.0 - std::cos(k * y));
  };
  c.rho_y = [k](double x, double y) { return 0.5 * k * std::sin(k * x) * std::sin(k * y); };
  c.law = ViscosityLaw::affine(0.75, 0.25, 0.5);
  return c;
}

MmsCase mms_zero() {
  MmsCase c;
  c.name = "zero";
  c.u = [](double, double) { return 0.0; };
  c.p = [](double) { return 0.0; };
  c.rho = [](double, double) { return 1.0; };
  c.law = ViscosityLaw::constant(1.0, 0.5);
  c.u_x = c.u;
  c.u_y = c.u;
  c.u_xx = c.u;
  c.u_yy = c.u;
  c.p_x = c.p;
  c.rho_x = c.u;
  c.rho_y = c.u;
  return c;
}

MmsCase mms_case_by_name(const std::string& name) {
  if (name == "constant-mu") return mms_constant_mu();
  if (name == "variable-mu") return mms_variable_mu();
  if (name == "zero") return mms_zero();
  throw PreconditionError("unknown MMS case '" + name + "'");
}

double fitted_order(const std::vector<double>& h, const std::vector<double>& err) {
  const std::size_t n = h.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double lx = std::log(h[k]);
    const double ly = std::log(err[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

ConvergenceReport convergence_study(const MmsCase& mms, const std::vector<int>& levels,
                                    const StokesOptions& options) {
  if (levels.size() < 3) throw PreconditionError("convergence_study: need at least 3 levels");
  for (std::size_t k = 1; k < levels.size(); ++k) {
    if (levels[k] != 2 * levels[k - 1]) {
      throw PreconditionError("convergence_study: each level must double the previous one");
    }
  }
  ConvergenceReport rep;
  for (int n : levels) {
    const Grid g = make_grid(mms.length, n, n);
    const ScalarField f = mms_forcing(mms, g);
    const ScalarField rho = sample(g, mms.rho, BoundaryY::free);
    const StokesOperator op = StokesOperator::assemble(mms.law, rho, std::nullopt, options);
    const HStokesSolution sol = op.solve(f);
    const ScalarField u_exact = sample(g, mms.u, BoundaryY::dirichlet_zero);
    PressureProfile p_exact = sample_profile(g, mms.p);
    gauge_pressure(p_exact);
    PressureProfile p_num = sol.P;
    gauge_pressure(p_num);
    PressureProfile p_err(g);
    for (int i = 0; i < g.nx(); ++i) p_err[i] = p_num[i] - p_exact[i];

    ConvergenceLevel lvl;
    lvl.n = n;
    lvl.h = g.hx();
    const ScalarField err = sol.u - u_exact;
    lvl.u_l2 = lp_norm(err, 2.0);
    lvl.u_h1 = sobolev_norm(err, 1);
    lvl.p_l2 = lp_norm(p_err, 2.0);
    lvl.constraint_residual = sol.constraint_residual;
    rep.levels.push_back(lvl);
  }
  bool all_small = true;
  for (const auto& l : rep.levels) {
    if (l.u_l2 > 1e-12 || l.u_h1 > 1e-12 || l.p_l2 > 1e-12) all_small = false;
  }
  if (all_small) {
    rep.degenerate = true;
    return rep;
  }
  std::vector<double> h, eu, eh, ep;
  for (const auto& l : rep.levels) {
    h.push_back(l.h);
    eu.push_back(l.u_l2);
    eh.push_back(l.u_h1);
    ep.push_back(l.p_l2);
  }
  rep.order_u_l2 = fitted_order(h, eu);
  rep.order_u_h1 = fitted_order(h, eh);
  rep.order_p_l2 = fitted_order(h, ep);
  return rep;
}

}  // namespace hydrostat
