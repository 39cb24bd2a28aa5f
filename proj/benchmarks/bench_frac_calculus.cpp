#include <benchmark/benchmark.h>

#include <cmath>

#include "fracspde/frac_calculus.hpp"

using namespace fracspde;

// Crossover between the direct O(N^2) rule and the FFT path.
static void BM_FractionalIntegral(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  frac::TimeGrid grid(1.0, N);
  auto phi = frac::RealPath::sample(grid, [](double t) { return std::sin(3.0 * t); });
  for (auto _ : state) {
    benchmark::DoNotOptimize(frac::fractional_integral(0.6, phi));
  }
  state.SetComplexityN(N);
}
BENCHMARK(BM_FractionalIntegral)->RangeMultiplier(4)->Range(256, 1 << 16)->Complexity();

static void BM_CaputoL1(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  frac::TimeGrid grid(1.0, N);
  auto phi = frac::RealPath::sample(grid, [](double t) { return t * t; });
  for (auto _ : state) {
    benchmark::DoNotOptimize(frac::caputo_derivative(0.5, phi));
  }
}
BENCHMARK(BM_CaputoL1)->Arg(1024)->Arg(8192);
