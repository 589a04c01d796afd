#include <cmath>
#include <limits>

#include "doctest.h"
#include "hydrostat/errors.hpp"
#include "hydrostat/grid_field.hpp"
#include "support.hpp"

using namespace hydrostat;
using hydrostat::test::kPi;

TEST_CASE("make_grid spacing and preconditions") {
  const Grid a = make_grid(1.0, 16, 16);
  CHECK(a.hx() == doctest::Approx(0.0625));
  CHECK(a.hy() == doctest::Approx(0.0625));
  const Grid b = make_grid(2.0, 32, 16);
  CHECK(b.hx() == doctest::Approx(0.0625));
  CHECK(b.hy() == doctest::Approx(0.0625));
  CHECK(b.size() == 32u * 17u);
  CHECK_THROWS_AS(make_grid(1.0, 7, 16), PreconditionError);
  CHECK_THROWS_AS(make_grid(1.0, 9, 16), PreconditionError);
  CHECK_THROWS_AS(make_grid(1.0, 16, 4), PreconditionError);
  CHECK_THROWS_AS(make_grid(0.0, 16, 16), PreconditionError);
  CHECK_THROWS_AS(make_grid(-1.0, 16, 16), PreconditionError);
}

TEST_CASE("sample honours the wall condition") {
  const Grid g = make_grid(1.0, 16, 16);
  const ScalarField one = sample(g, [](double, double) { return 1.0; }, BoundaryY::free);
  CHECK(one.min() == 1.0);
  CHECK(one.max() == 1.0);

  const ScalarField s = sample(
      g, [](double x, double y) { return std::sin(2 * kPi * x) * std::sin(2 * kPi * y); },
      BoundaryY::dirichlet_zero);
  for (int i = 0; i < g.nx(); ++i) {
    CHECK(s(i, 0) == 0.0);
    CHECK(s(i, g.ny()) == 0.0);
  }
  CHECK_THROWS_AS(sample(g, [](double x, double y) { return std::sin(2 * kPi * x) * std::cos(2 * kPi * y); },
                         BoundaryY::dirichlet_zero),
                  PreconditionError);
  CHECK_THROWS_AS(sample(g, [](double, double) { return std::numeric_limits<double>::quiet_NaN(); },
                         BoundaryY::free),
                  PreconditionError);
}

TEST_CASE("check_valid rejects non-finite values and dirty walls") {
  const Grid g = make_grid(1.0, 8, 8);
  ScalarField f(g, BoundaryY::free, 1.0);
  f(3, 3) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(f.check_valid("f"), PreconditionError);
  ScalarField u(g, BoundaryY::dirichlet_zero);
  u(2, 0) = 1.0;
  CHECK_THROWS_AS(u.check_valid("u"), PreconditionError);
}

TEST_CASE("dx stencil values") {
  const Grid g = make_grid(1.0, 8, 8);
  const ScalarField c(g, BoundaryY::free, 3.0);
  CHECK(dx(c).max_abs() == 0.0);
  const ScalarField s = sample(g, [](double x, double) { return std::sin(2 * kPi * x); }, BoundaryY::free);
  CHECK(dx(s)(0, 3) == doctest::Approx(8.0 * std::sin(kPi / 4.0)).epsilon(1e-14));
  CHECK(dx(s)(0, 3) == doctest::Approx(5.656854).epsilon(1e-6));
}

TEST_CASE("dy is exact on quadratics and zero on constants") {
  const Grid g = make_grid(1.0, 8, 16);
  const ScalarField c(g, BoundaryY::free, -2.0);
  CHECK(dy(c).max_abs() <= 1e-12);
  const ScalarField y = sample(g, [](double, double yy) { return yy; }, BoundaryY::free);
  const ScalarField d = dy(y);
  for (double v : d.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  const ScalarField q = sample(g, [](double, double yy) { return yy * yy; }, BoundaryY::free);
  const ScalarField dq = dy(q);
  for (int j = 0; j <= g.ny(); ++j) CHECK(dq(2, j) == doctest::Approx(2.0 * g.y(j)).epsilon(1e-12));
}

TEST_CASE("Richardson order of dx, dy and cumint_y") {
  double ex[3], ey[3], ec[3];
  const int ns[3] = {16, 32, 64};
  for (int k = 0; k < 3; ++k) {
    const Grid g = make_grid(1.0, ns[k], ns[k]);
    const ScalarField s = sample(g, [](double x, double) { return std::sin(2 * kPi * x); }, BoundaryY::free);
    const ScalarField sy = sample(g, [](double, double y) { return std::sin(2 * kPi * y); }, BoundaryY::free);
    const ScalarField ds = dx(s);
    const ScalarField dsy = dy(sy);
    const ScalarField cs = cumint_y(sy);
    ex[k] = ey[k] = ec[k] = 0.0;
    for (int i = 0; i < g.nx(); ++i) {
      for (int j = 0; j <= g.ny(); ++j) {
        ex[k] = std::max(ex[k], std::abs(ds(i, j) - 2 * kPi * std::cos(2 * kPi * g.x(i))));
        ey[k] = std::max(ey[k], std::abs(dsy(i, j) - 2 * kPi * std::cos(2 * kPi * g.y(j))));
        ec[k] = std::max(ec[k], std::abs(cs(i, j) - (1 - std::cos(2 * kPi * g.y(j))) / (2 * kPi)));
      }
    }
  }
  for (int k = 0; k < 2; ++k) {
    CHECK(test::observed_order(ex[k], ex[k + 1]) >= 1.9);
    CHECK(test::observed_order(ey[k], ey[k + 1]) >= 1.9);
    CHECK(test::observed_order(ec[k], ec[k + 1]) >= 1.9);
  }
}

TEST_CASE("cumint_y examples") {
  const Grid g = make_grid(1.0, 8, 32);
  const ScalarField one(g, BoundaryY::free, 1.0);
  const ScalarField c1 = cumint_y(one);
  for (int j = 0; j <= g.ny(); ++j) CHECK(c1(5, j) == doctest::Approx(g.y(j)).epsilon(1e-12));

  const ScalarField s = sample(g, [](double, double y) { return std::sin(2 * kPi * y); }, BoundaryY::free);
  CHECK(std::abs(cumint_y(s)(0, g.ny())) <= 1e-12);
  const ScalarField c = sample(g, [](double, double y) { return std::cos(2 * kPi * y); }, BoundaryY::free);
  CHECK(std::abs(cumint_y(c)(0, g.ny() / 2)) <= 10 * g.hy() * g.hy());
}

TEST_CASE("cumint_y at the top wall matches column_integral") {
  const Grid g = make_grid(1.0, 16, 24);
  const ScalarField f = test::random_field(g, 7);
  const ScalarField c = cumint_y(f);
  const auto col = column_integral(f);
  for (int i = 0; i < g.nx(); ++i) CHECK(std::abs(c(i, g.ny()) - col[i]) <= 1e-13);
}

TEST_CASE("integral_domain examples") {
  const Grid g = make_grid(1.0, 32, 32);
  CHECK(integral_domain(ScalarField(g, BoundaryY::free, 1.0)) == doctest::Approx(1.0).epsilon(1e-14));
  const ScalarField s = sample(g, [](double x, double) { return std::sin(2 * kPi * x); }, BoundaryY::free);
  CHECK(std::abs(integral_domain(s)) <= 1e-12);
  const ScalarField q = sample(
      g,
      [](double x, double y) {
        const double a = std::sin(2 * kPi * x) * std::sin(2 * kPi * y);
        return a * a;
      },
      BoundaryY::free);
  CHECK(std::abs(integral_domain(q) - 0.25) <= 10 * g.hy() * g.hy());
}

TEST_CASE("linearity of dx and dy on random fields") {
  const Grid g = make_grid(1.0, 16, 16);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ScalarField f = test::random_field(g, seed);
    const ScalarField h = test::random_field(g, seed + 100);
    const double a = 0.3 * static_cast<double>(seed), b = -1.7;
    const ScalarField lhs_x = dx(a * f + b * h);
    const ScalarField rhs_x = a * dx(f) + b * dx(h);
    const ScalarField lhs_y = dy(a * f + b * h);
    const ScalarField rhs_y = a * dy(f) + b * dy(h);
    CHECK(test::max_abs_diff(lhs_x, rhs_x) <= 1e-12);
    CHECK(test::max_abs_diff(lhs_y, rhs_y) <= 1e-12);
  }
}

TEST_CASE("discrete integration by parts in x") {
  const Grid g = make_grid(2.0, 24, 16);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ScalarField f = test::random_field(g, seed);
    const ScalarField h = test::random_field(g, seed + 50);
    CHECK(std::abs(integral_domain(dx(f) * h) + integral_domain(f * dx(h))) <= 1e-10);
  }
}

TEST_CASE("x-constant and y-constant fields") {
  const Grid g = make_grid(1.0, 16, 16);
  const ScalarField xc = sample(g, [](double, double y) { return std::exp(y); }, BoundaryY::free);
  CHECK(dx(xc).max_abs() == 0.0);
  const ScalarField yc = sample(g, [](double x, double) { return std::cos(2 * kPi * x); }, BoundaryY::free);
  const ScalarField d = dy(yc);
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 1; j < g.ny(); ++j) CHECK(d(i, j) == 0.0);
    CHECK(std::abs(d(i, 0)) <= 1e-12);
    CHECK(std::abs(d(i, g.ny())) <= 1e-12);
  }
}

TEST_CASE("pressure profile mean and expansion") {
  const Grid g = make_grid(1.0, 16, 8);
  PressureProfile p = sample_profile(g, [](double x) { return 2.0 + std::cos(2 * kPi * x); });
  CHECK(p.mean() == doctest::Approx(2.0).epsilon(1e-14));
  p.project_mean_zero();
  CHECK(std::abs(p.mean()) <= 1e-12);
  const ScalarField e = p.expand();
  for (int j = 0; j <= g.ny(); ++j) CHECK(e(3, j) == p[3]);
  const PressureProfile dp = dx(p);
  CHECK(dp[0] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("field arithmetic keeps grids consistent") {
  const Grid a = make_grid(1.0, 8, 8);
  const Grid b = make_grid(1.0, 16, 8);
  ScalarField fa(a, BoundaryY::free, 1.0);
  const ScalarField fb(b, BoundaryY::free, 1.0);
  CHECK_THROWS_AS(fa += fb, PreconditionError);
  const ScalarField u(a, BoundaryY::dirichlet_zero);
  CHECK((fa * u).bc() == BoundaryY::dirichlet_zero);
}
