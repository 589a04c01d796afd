#include "hydrostat/norms.hpp"

#include <algorithm>
#include <cmath>

#include "hydrostat/errors.hpp"

namespace hydrostat {

double lp_norm(const ScalarField& f, double p) {
  if (!(p >= 1.0)) throw PreconditionError("lp_norm: p must be >= 1");
  if (std::isinf(p)) return f.max_abs();
  const Grid& g = f.grid();
  double acc = 0.0;
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 0; j <= g.ny(); ++j) {
      const double a = std::abs(f(i, j));
      acc += quadrature_weight(g, j) * (p == 2.0 ? a * a : std::pow(a, p));
    }
  }
  return p == 2.0 ? std::sqrt(acc) : std::pow(acc, 1.0 / p);
}

double lp_norm(const PressureProfile& prof, double q) {
  if (!(q >= 1.0)) throw PreconditionError("lp_norm: p must be >= 1");
  double acc = 0.0;
  for (double v : prof.values()) {
    if (std::isinf(q)) {
      acc = std::max(acc, std::abs(v));
    } else {
      acc += std::pow(std::abs(v), q);
    }
  }
  if (std::isinf(q)) return acc;
  return std::pow(acc * prof.grid().hx(), 1.0 / q);
}

double aniso_norm(const ScalarField& f, NormExponent outer_y, NormExponent inner_x) {
  const Grid& g = f.grid();
  std::vector<double> inner(static_cast<std::size_t>(g.ny() + 1), 0.0);
  for (int j = 0; j <= g.ny(); ++j) {
    double acc = 0.0;
    for (int i = 0; i < g.nx(); ++i) {
      const double a = std::abs(f(i, j));
      if (inner_x == NormExponent::infinity) {
        acc = std::max(acc, a);
      } else {
        acc += a * a;
      }
    }
    inner[static_cast<std::size_t>(j)] =
        inner_x == NormExponent::infinity ? acc : std::sqrt(acc * g.hx());
  }
  if (outer_y == NormExponent::infinity) {
    return *std::max_element(inner.begin(), inner.end());
  }
  double acc = 0.0;
  for (int j = 0; j <= g.ny(); ++j) {
    const double w = (j == 0 || j == g.ny()) ? 0.5 * g.hy() : g.hy();
    acc += w * inner[static_cast<std::size_t>(j)] * inner[static_cast<std::size_t>(j)];
  }
  return std::sqrt(acc);
}

namespace {

double l2_sq(const ScalarField& f) {
  const double n = lp_norm(f, 2.0);
  return n * n;
}

}  // namespace

double sobolev_norm(const ScalarField& f, int k) {
  if (k < 0 || k > 3) throw PreconditionError("sobolev_norm: k must be in 0..3");
  // Rows of the derivative table: level[a] holds dx^a of the current dy power.
  double acc = 0.0;
  ScalarField ypow = f;
  for (int b = 0; b <= k; ++b) {
    ScalarField cur = ypow;
    for (int a = 0; a + b <= k; ++a) {
      acc += l2_sq(cur);
      if (a + b < k) cur = dx(cur);
    }
    if (b < k) ypow = dy(ypow);
  }
  return std::sqrt(acc);
}

double sobolev_norm(const PressureProfile& p, int k) { return sobolev_norm(p.expand(), k); }

double grad_linf(const ScalarField& f) {
  const ScalarField fx = dx(f);
  const ScalarField fy = dy(f);
  double m = 0.0;
  auto a = fx.values();
  auto b = fy.values();
  for (std::size_t q = 0; q < a.size(); ++q) m = std::max(m, std::hypot(a[q], b[q]));
  return m;
}

double grad_l2(const ScalarField& f) { return std::sqrt(l2_sq(dx(f)) + l2_sq(dy(f))); }

double hessian_l2(const ScalarField& f) {
  const ScalarField fx = dx(f);
  const ScalarField fy = dy(f);
  return std::sqrt(l2_sq(dx(fx)) + 2.0 * l2_sq(dy(fx)) + l2_sq(dy(fy)));
}

double hessian_linf(const ScalarField& f) {
  const ScalarField fx = dx(f);
  const ScalarField fy = dy(f);
  const ScalarField fxx = dx(fx);
  const ScalarField fxy = dy(fx);
  const ScalarField fyy = dy(fy);
  double m = 0.0;
  for (std::size_t q = 0; q < fxx.values().size(); ++q) {
    const double a = fxx.values()[q];
    const double b = fxy.values()[q];
    const double c = fyy.values()[q];
    m = std::max(m, std::sqrt(a * a + 2.0 * b * b + c * c));
  }
  return m;
}

double third_derivative_l2(const ScalarField& f) {
  const ScalarField fx = dx(f);
  const ScalarField fy = dy(f);
  const ScalarField fxx = dx(fx);
  const ScalarField fxy = dy(fx);
  const ScalarField fyy = dy(fy);
  return std::sqrt(l2_sq(dx(fxx)) + 3.0 * l2_sq(dy(fxx)) + 3.0 * l2_sq(dy(fxy)) +
                   l2_sq(dy(fyy)));
}

double w1inf_norm(const ScalarField& f) { return f.max_abs() + grad_linf(f); }

double phi_functional(const ScalarField& rho, const ScalarField& u) {
  return 1.0 + grad_linf(rho) + hessian_l2(rho) + grad_l2(u);
}

NormSnapshot make_snapshot(double t, const ScalarField& rho, const ScalarField& u,
                           const ScalarField& ut, const PressureProfile& p) {
  NormSnapshot s;
  s.t = t;
  s.l2_u = lp_norm(u, 2.0);
  s.h1_u = sobolev_norm(u, 1);
  s.h2_u = sobolev_norm(u, 2);
  s.h3_u = sobolev_norm(u, 3);
  s.linf_grad_rho = grad_linf(rho);
  s.l2_hess_rho = hessian_l2(rho);
  s.w1inf_rho = rho.max_abs() + s.linf_grad_rho;
  s.w22_rho = sobolev_norm(rho, 2);
  double acc = 0.0;
  const Grid& g = rho.grid();
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 0; j <= g.ny(); ++j) {
      acc += quadrature_weight(g, j) * std::max(rho(i, j), 0.0) * ut(i, j) * ut(i, j);
    }
  }
  s.l2_sqrt_rho_ut = std::sqrt(acc);
  s.h1_P = sobolev_norm(p, 1);
  return s;
}

double j_functional(const NormSnapshot& s, double accumulated) {
  if (!(accumulated >= 0.0)) throw PreconditionError("j_functional: accumulated must be >= 0");
  return 1.0 + s.h2_u + s.h1_P + s.l2_sqrt_rho_ut + s.w1inf_rho + s.w22_rho + accumulated;
}

void PhiSeries::append(double t, double phi_value, double j_value) {
  if (!times.empty() && !(t > times.back())) {
    throw PreconditionError("PhiSeries: times must be increasing");
  }
  times.push_back(t);
  phi.push_back(phi_value);
  j.push_back(j_value);
}

std::optional<BlowupBreach> blowup_monitor(const PhiSeries& series, double threshold) {
  if (!(threshold > 1.0)) throw PreconditionError("blowup_monitor: threshold must exceed 1");
  for (std::size_t k = 0; k < series.phi.size(); ++k) {
    // A non-finite value is a breach as well.
    if (!(series.phi[k] < threshold)) {
      return BlowupBreach{k, k < series.times.size() ? series.times[k] : 0.0, series.phi[k]};
    }
  }
  return std::nullopt;
}

namespace {

GnInstance make_instance(double lhs, double interp, double lower) {
  GnInstance g;
  g.lhs = lhs;
  g.interpolation_term = interp;
  g.lower_order_term = lower;
  const double rhs = interp + lower;
  if (rhs <= 0.0 || lhs == 0.0) {
    g.degenerate = true;
    return g;
  }
  g.ratio = lhs / rhs;
  g.interpolation_ratio = interp > 0.0 ? lhs / interp : 0.0;
  return g;
}

}  // namespace

GnReport gn_check(const ScalarField& f) {
  GnReport r;
  const double l2 = lp_norm(f, 2.0);
  const double grad = grad_l2(f);
  r.l6 = make_instance(lp_norm(f, 6.0), std::pow(grad, 2.0 / 3.0) * std::cbrt(l2), l2);
  const double fx = lp_norm(dx(f), 2.0);
  r.mixed = make_instance(aniso_norm(f, NormExponent::two, NormExponent::infinity),
                          std::sqrt(fx * l2), l2);
  r.linf = make_instance(f.max_abs(), std::sqrt(sobolev_norm(f, 2) * l2), l2);
  return r;
}

}  // namespace hydrostat
