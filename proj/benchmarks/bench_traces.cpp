#include <benchmark/benchmark.h>

#include <numbers>

#include "conelef/checks.hpp"
#include "conelef/conekernels.hpp"
#include "conelef/lefschetz.hpp"

using namespace conelef;

static void BM_Type1Trace(benchmark::State& state) {
  const ScalingMap map{0.5, circle_spectrum(std::numbers::pi / 3.0, static_cast<int>(state.range(0)))};
  for (auto _ : state) benchmark::DoNotOptimize(type1_trace(0, 0.05, map, {1, 2.0}).value);
}
BENCHMARK(BM_Type1Trace)->Arg(20)->Arg(60);

static void BM_Type2Trace(benchmark::State& state) {
  const ScalingMap map{0.5, circle_spectrum(std::numbers::pi / 3.0, 60)};
  KernelOptions opts;
  opts.lambda_method = state.range(0) == 0 ? LambdaMethod::Weber : LambdaMethod::Direct;
  for (auto _ : state) benchmark::DoNotOptimize(type2_trace(1, 0.4, map, {1, 2.0}, opts).value);
}
BENCHMARK(BM_Type2Trace)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_ZetaGeneral(benchmark::State& state) {
  const SingularFixedPoint q{"q", 0.5, 1.0, circle_spectrum(1.0, 60)};
  for (auto _ : state) benchmark::DoNotOptimize(zeta_general(q, 0, Extension::Max).value);
}
BENCHMARK(BM_ZetaGeneral)->Unit(benchmark::kMillisecond);

static void BM_Sweep(benchmark::State& state) {
  const Problem p = circle_vertex_problem(0.5, std::numbers::pi / 3.0, 60);
  const auto grid = geometric_grid(0.0125, 0.4, 6);
  for (auto _ : state) benchmark::DoNotOptimize(sweep_supertrace(p, grid, Extension::Max).limit);
}
BENCHMARK(BM_Sweep)->Unit(benchmark::kMillisecond)->Iterations(1);
