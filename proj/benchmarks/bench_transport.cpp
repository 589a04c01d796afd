#include <cmath>
#include <numbers>

#include <benchmark/benchmark.h>

#include "hydrostat/transport.hpp"

using namespace hydrostat;

namespace {

constexpr double kPi = std::numbers::pi;

void BM_TransportStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g = make_grid(1.0, n, n);
  const ScalarField rho = sample(g, [](double x, double y) { return 1.0 + 0.5 * std::cos(kPi * y) * std::sin(2 * kPi * x); },
                                 BoundaryY::free);
  const ScalarField u = sample(g, [](double x, double y) { return std::sin(2 * kPi * x) * std::sin(2 * kPi * y); },
                               BoundaryY::dirichlet_zero);
  const ScalarField w = vertical_velocity(u);
  const TransportParams params{1e-3, 0.2 / (n * 4.0), true};
  for (auto _ : state) benchmark::DoNotOptimize(transport_step(rho, u, w, params));
  state.SetComplexityN(n * n);
}

void BM_VerticalVelocity(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g = make_grid(1.0, n, n);
  const ScalarField u = sample(g, [](double x, double y) { return std::sin(2 * kPi * x) * std::sin(2 * kPi * y); },
                               BoundaryY::dirichlet_zero);
  for (auto _ : state) benchmark::DoNotOptimize(vertical_velocity(u));
}

}  // namespace

BENCHMARK(BM_TransportStep)->RangeMultiplier(2)->Range(32, 256)->Complexity();
BENCHMARK(BM_VerticalVelocity)->RangeMultiplier(2)->Range(32, 256);

BENCHMARK_MAIN();
