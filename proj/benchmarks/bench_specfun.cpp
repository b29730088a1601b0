#include <benchmark/benchmark.h>

#include <cmath>

#include "conelef/specfun.hpp"

using namespace conelef;

static void BM_BesselIScaled(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0));
  double nu = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bessel_i_scaled(nu, x));
    nu = nu > 40.0 ? 0.0 : nu + 0.37;
  }
}
BENCHMARK(BM_BesselIScaled)->Arg(1)->Arg(25)->Arg(35)->Arg(500);

static void BM_BesselJ(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bessel_j(2.5, x));
}
BENCHMARK(BM_BesselJ)->Arg(2)->Arg(40);

static void BM_LaplaceClosedForm(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(laplace_bessel_i(0.3125, 0.25, 3.0));
}
BENCHMARK(BM_LaplaceClosedForm);

static void BM_LaplaceQuadrature(benchmark::State& state) {
  const double p = 0.3125, a = 0.25;
  const auto f = [=](double u) { return std::exp(-(p - a) * u) * bessel_i_scaled(3.0, a * u); };
  for (auto _ : state) benchmark::DoNotOptimize(integrate_semiinfinite(f, {}).value);
}
BENCHMARK(BM_LaplaceQuadrature);
