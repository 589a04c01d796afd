#include <cmath>

#include "doctest.h"
#include "hydrostat/errors.hpp"
#include "hydrostat/norms.hpp"
#include "support.hpp"

using namespace hydrostat;
using hydrostat::test::kPi;

namespace {

ScalarField shear(const Grid& g) {
  return sample(g, [](double x, double y) { return std::sin(2 * kPi * x) * std::sin(2 * kPi * y); },
                BoundaryY::free);
}

}  // namespace

TEST_CASE("lp_norm examples") {
  const Grid g = make_grid(1.0, 32, 32);
  CHECK(lp_norm(ScalarField(g, BoundaryY::free, 1.0), 2.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(lp_norm(shear(g), 2.0) - 0.5) <= 10 * g.hx() * g.hx());
  const Grid g16 = make_grid(1.0, 16, 16);
  const ScalarField s = sample(g16, [](double x, double) { return std::sin(2 * kPi * x); }, BoundaryY::free);
  CHECK(std::abs(lp_norm(s, kInfinity) - 1.0) <= 1e-12);
  CHECK_THROWS_AS(lp_norm(s, 0.5), PreconditionError);
}

TEST_CASE("aniso_norm examples") {
  const Grid g = make_grid(1.0, 32, 32);
  const ScalarField one(g, BoundaryY::free, 1.0);
  CHECK(aniso_norm(one, NormExponent::two, NormExponent::two) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(aniso_norm(one, NormExponent::two, NormExponent::infinity) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(aniso_norm(one, NormExponent::infinity, NormExponent::infinity) == 1.0);

  const ScalarField gy = sample(g, [](double, double y) { return std::exp(y) - 1.5; }, BoundaryY::free);
  const double col = std::sqrt(column_integral(gy * gy)[0]);
  CHECK(aniso_norm(gy, NormExponent::two, NormExponent::infinity) == doctest::Approx(col).epsilon(1e-13));

  const Grid g64 = make_grid(1.0, 64, 64);
  CHECK(std::abs(aniso_norm(shear(g64), NormExponent::two, NormExponent::infinity) - 1.0 / std::sqrt(2.0)) <=
        10 * g64.hy() * g64.hy());
}

TEST_CASE("sobolev_norm examples") {
  const Grid g = make_grid(1.0, 64, 16);
  const ScalarField zero(g, BoundaryY::free);
  for (int k = 0; k <= 3; ++k) CHECK(sobolev_norm(zero, k) == 0.0);
  const ScalarField s = sample(g, [](double x, double) { return std::sin(2 * kPi * x); }, BoundaryY::free);
  const double exact = std::sqrt(0.5 + 2 * kPi * kPi);
  CHECK(std::abs(exact - 4.4995) <= 1e-3);
  CHECK(std::abs(sobolev_norm(s, 1) - exact) <= 1e-2);
  double err[2];
  for (int k = 0; k < 2; ++k) {
    const Grid gk = make_grid(1.0, 64 << k, 16);
    const ScalarField sk = sample(gk, [](double x, double) { return std::sin(2 * kPi * x); }, BoundaryY::free);
    err[k] = std::abs(sobolev_norm(sk, 1) - exact);
  }
  CHECK(test::observed_order(err[0], err[1]) >= 1.9);
  CHECK_THROWS_AS(sobolev_norm(s, 4), PreconditionError);
  CHECK_THROWS_AS(sobolev_norm(s, -1), PreconditionError);
}

TEST_CASE("sobolev_norm is non-decreasing in k") {
  const Grid g = make_grid(1.0, 16, 16);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const ScalarField f = test::random_field(g, seed);
    CHECK(sobolev_norm(f, 1) >= sobolev_norm(f, 0));
    CHECK(sobolev_norm(f, 2) >= sobolev_norm(f, 1));
    CHECK(sobolev_norm(f, 3) >= sobolev_norm(f, 2));
  }
}

TEST_CASE("norm axioms on random fields") {
  const Grid g = make_grid(1.0, 16, 16);
  const double tol = 1e-10;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const ScalarField f = test::random_field(g, seed);
    const ScalarField h = test::random_field(g, seed + 1000);
    const double a = -2.5;
    for (double p : {1.0, 2.0, 3.0, kInfinity}) {
      CHECK(lp_norm(f + h, p) <= (lp_norm(f, p) + lp_norm(h, p)) * (1 + tol));
      CHECK(lp_norm(a * f, p) == doctest::Approx(std::abs(a) * lp_norm(f, p)).epsilon(tol));
    }
    for (auto outer : {NormExponent::two, NormExponent::infinity}) {
      for (auto inner : {NormExponent::two, NormExponent::infinity}) {
        CHECK(aniso_norm(f + h, outer, inner) <=
              (aniso_norm(f, outer, inner) + aniso_norm(h, outer, inner)) * (1 + tol));
        CHECK(aniso_norm(a * f, outer, inner) ==
              doctest::Approx(std::abs(a) * aniso_norm(f, outer, inner)).epsilon(tol));
      }
    }
    for (int k = 0; k <= 3; ++k) {
      CHECK(sobolev_norm(f + h, k) <= (sobolev_norm(f, k) + sobolev_norm(h, k)) * (1 + tol));
      CHECK(sobolev_norm(a * f, k) == doctest::Approx(std::abs(a) * sobolev_norm(f, k)).epsilon(tol));
    }
  }
}

TEST_CASE("mixed norm dominates L2") {
  const Grid g = make_grid(2.0, 16, 16);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const ScalarField f = test::random_field(g, seed);
    CHECK(lp_norm(f, 2.0) <=
          aniso_norm(f, NormExponent::two, NormExponent::infinity) * std::sqrt(g.length()) * (1 + 1e-12));
  }
}

TEST_CASE("phi_functional examples") {
  const Grid g = make_grid(1.0, 64, 16);
  const ScalarField zero(g, BoundaryY::dirichlet_zero);
  CHECK(phi_functional(ScalarField(g, BoundaryY::free, 1.0), zero) == doctest::Approx(1.0).epsilon(1e-14));
  const ScalarField rho =
      sample(g, [](double x, double) { return 1.0 + 0.1 * std::sin(2 * kPi * x); }, BoundaryY::free);
  const double exact = 1.0 + 0.2 * kPi + 0.1 * 4 * kPi * kPi / std::sqrt(2.0);
  CHECK(std::abs(phi_functional(rho, zero) - exact) <= 2e-2);
  const Grid g2 = make_grid(1.0, 128, 16);
  const ScalarField rho2 =
      sample(g2, [](double x, double) { return 1.0 + 0.1 * std::sin(2 * kPi * x); }, BoundaryY::free);
  const double e1 = std::abs(phi_functional(rho, zero) - exact);
  const double e2 = std::abs(phi_functional(rho2, ScalarField(g2, BoundaryY::dirichlet_zero)) - exact);
  CHECK(test::observed_order(e1, e2) >= 1.9);

  const ScalarField u = test::random_smooth(g, 3, BoundaryY::dirichlet_zero);
  CHECK(phi_functional(rho, 2.0 * u) >= phi_functional(rho, u));
}

TEST_CASE("j_functional examples") {
  const Grid g = make_grid(1.0, 16, 16);
  const ScalarField rho(g, BoundaryY::free, 1.0);
  const ScalarField u(g, BoundaryY::dirichlet_zero);
  const NormSnapshot s = make_snapshot(0.0, rho, u, u, PressureProfile(g));
  CHECK(j_functional(s, 0.0) == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(j_functional(s, 2.0) >= j_functional(s, 1.0));
  CHECK(j_functional(s, 0.0) >= 1.0);
  CHECK_THROWS_AS(j_functional(s, -1.0), PreconditionError);

  const ScalarField u2 = test::random_smooth(g, 11, BoundaryY::dirichlet_zero);
  const NormSnapshot s2 = make_snapshot(0.5, rho, u2, u2, PressureProfile(g));
  CHECK(s2.h2_u >= s2.h1_u);
  CHECK(s2.h1_u >= s2.l2_u);
  CHECK(j_functional(s2, 0.0) >= 1.0);
}

TEST_CASE("blowup_monitor examples") {
  PhiSeries flat;
  for (int k = 0; k < 5; ++k) flat.append(0.1 * k, 1.0, 3.0);
  CHECK_FALSE(blowup_monitor(flat, 10.0).has_value());

  PhiSeries rising;
  const double phis[] = {1.0, 5.0, 12.0, 30.0};
  for (int k = 0; k < 4; ++k) rising.append(0.1 * k, phis[k], 3.0);
  const auto breach = blowup_monitor(rising, 10.0);
  REQUIRE(breach.has_value());
  CHECK(breach->index == 2u);
  CHECK(breach->phi == 12.0);
  CHECK(breach->t == doctest::Approx(0.2));
  CHECK_THROWS_AS(blowup_monitor(rising, 0.5), PreconditionError);
}

TEST_CASE("gn_check degenerate and scale invariance") {
  const Grid g = make_grid(1.0, 32, 32);
  const GnReport z = gn_check(ScalarField(g, BoundaryY::free));
  CHECK(z.l6.degenerate);
  CHECK(z.mixed.degenerate);
  CHECK(z.linf.degenerate);

  const ScalarField s = shear(g);
  const GnReport r = gn_check(s);
  CHECK_FALSE(r.l6.degenerate);
  CHECK(std::isfinite(r.l6.ratio));
  CHECK(std::isfinite(r.mixed.ratio));
  CHECK(std::isfinite(r.linf.ratio));
  const GnReport r3 = gn_check(3.0 * s);
  CHECK(r3.l6.interpolation_ratio == doctest::Approx(r.l6.interpolation_ratio).epsilon(1e-10));
  CHECK(r3.mixed.interpolation_ratio == doctest::Approx(r.mixed.interpolation_ratio).epsilon(1e-10));
  CHECK(r3.linf.interpolation_ratio == doctest::Approx(r.linf.interpolation_ratio).epsilon(1e-10));
}

TEST_CASE("gn_check ratios stay bounded over random smooth fields") {
  const Grid g = make_grid(1.0, 16, 16);
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const GnReport r = gn_check(test::random_smooth(g, seed));
    worst = std::max({worst, r.l6.ratio, r.mixed.ratio, r.linf.ratio});
  }
  MESSAGE("largest gn ratio over 100 fields: " << worst);
  CHECK(std::isfinite(worst));
  CHECK(worst < 10.0);
}

TEST_CASE("gradient and hessian norms on a quadratic") {
  const Grid g = make_grid(1.0, 16, 16);
  const ScalarField q = sample(g, [](double, double y) { return y * y; }, BoundaryY::free);
  CHECK(grad_linf(q) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(hessian_linf(q) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(hessian_l2(q) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(third_derivative_l2(q) <= 1e-8);
  CHECK(w1inf_norm(q) == doctest::Approx(3.0).epsilon(1e-12));
}
