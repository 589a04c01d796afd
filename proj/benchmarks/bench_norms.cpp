#include <cmath>
#include <numbers>

#include <benchmark/benchmark.h>

#include "hydrostat/norms.hpp"

using namespace hydrostat;

namespace {

constexpr double kPi = std::numbers::pi;

struct Fields {
  ScalarField rho;
  ScalarField u;
};

Fields fields(int n) {
  const Grid g = make_grid(1.0, n, n);
  return {sample(g, [](double x, double y) { return 1.0 + 0.5 * std::cos(kPi * y) + 0.3 * std::sin(2 * kPi * x); },
                 BoundaryY::free),
          sample(g, [](double x, double y) { return std::sin(2 * kPi * x) * std::sin(2 * kPi * y); },
                 BoundaryY::dirichlet_zero)};
}

void BM_SobolevH3(benchmark::State& state) {
  const Fields f = fields(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sobolev_norm(f.u, 3));
}

void BM_Phi(benchmark::State& state) {
  const Fields f = fields(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(phi_functional(f.rho, f.u));
}

}  // namespace

BENCHMARK(BM_SobolevH3)->RangeMultiplier(2)->Range(32, 256);
BENCHMARK(BM_Phi)->RangeMultiplier(2)->Range(32, 256);

BENCHMARK_MAIN();
