#include <benchmark/benchmark.h>

#include "hydrostat/hstokes.hpp"

using namespace hydrostat;

namespace {

const ViscosityLaw kLaw = ViscosityLaw::affine(0.75, 0.25, 0.5);

ScalarField density(const Grid& g) {
  return sample(g, [](double x, double y) { return 1.0 + 0.3 * x * (1.0 - x) + 0.2 * y; }, BoundaryY::free);
}

void BM_Assemble(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g = make_grid(1.0, n, n);
  const ScalarField rho = density(g);
  for (auto _ : state) benchmark::DoNotOptimize(StokesOperator::assemble(kLaw, rho));
  state.SetComplexityN(n * n);
}

void BM_Solve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g = make_grid(1.0, n, n);
  const StokesOperator op = StokesOperator::assemble(kLaw, density(g));
  const ScalarField f = mms_forcing(mms_constant_mu(), g);
  for (auto _ : state) benchmark::DoNotOptimize(op.solve(f));
  state.SetComplexityN(n * n);
}

void BM_SolveIterative(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g = make_grid(1.0, n, n);
  StokesOptions opts;
  opts.linear_solver = LinearSolverKind::iterative;
  const StokesOperator op = StokesOperator::assemble(kLaw, density(g), std::nullopt, opts);
  const ScalarField f = mms_forcing(mms_constant_mu(), g);
  for (auto _ : state) benchmark::DoNotOptimize(op.solve(f));
}

}  // namespace

BENCHMARK(BM_Assemble)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond)->Complexity();
BENCHMARK(BM_Solve)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond)->Complexity();
BENCHMARK(BM_SolveIterative)->RangeMultiplier(2)->Range(16, 64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
