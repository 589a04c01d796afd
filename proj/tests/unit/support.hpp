#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "hydrostat/grid_field.hpp"

namespace hydrostat::test {

inline constexpr double kPi = std::numbers::pi;

/// Smooth random field: a few Fourier modes with seeded amplitudes and phases.
/// Under dirichlet_zero the y factor is sin(m pi y).
inline ScalarField random_smooth(const Grid& g, std::uint64_t seed, BoundaryY bc = BoundaryY::free) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  struct Mode {
    int kx, ky;
    double a, px, py;
  };
  Mode modes[4];
  for (auto& m : modes) {
    m = {static_cast<int>(rng() % 3) + 1, static_cast<int>(rng() % 3) + 1, amp(rng), phase(rng), phase(rng)};
  }
  const double L = g.length();
  return sample(
      g,
      [&](double x, double y) {
        double s = 0.0;
        for (const auto& m : modes) {
          const double fy = bc == BoundaryY::dirichlet_zero ? std::sin(m.ky * kPi * y)
                                                            : std::cos(m.ky * kPi * y + m.py);
          s += m.a * std::cos(2.0 * kPi * m.kx * x / L + m.px) * fy;
        }
        return s;
      },
      bc);
}

/// Nodewise uniform noise in [-1, 1].
inline ScalarField random_field(const Grid& g, std::uint64_t seed, BoundaryY bc = BoundaryY::free) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ScalarField f(g, BoundaryY::free);
  for (double& v : f.values()) v = u(rng);
  if (bc == BoundaryY::dirichlet_zero) {
    for (int i = 0; i < g.nx(); ++i) {
      f(i, 0) = 0.0;
      f(i, g.ny()) = 0.0;
    }
    f.set_bc(bc);
  }
  return f;
}

inline double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k) m = std::max(m, std::abs(a.values()[k] - b.values()[k]));
  return m;
}

inline double observed_order(double e_coarse, double e_fine) { return std::log2(e_coarse / e_fine); }

}  // namespace hydrostat::test
