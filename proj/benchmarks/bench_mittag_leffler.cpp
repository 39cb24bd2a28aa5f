#include <benchmark/benchmark.h>

#include "fracspde/gamma.hpp"
#include "fracspde/mittag_leffler.hpp"

using namespace fracspde;

static void BM_Gamma(benchmark::State& state) {
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gamma_fn(x));
    x += 0.37;
    if (x > 50.0) x -= 49.9;
  }
}
BENCHMARK(BM_Gamma);

// One evaluation per regime: series, branch-cut integral, asymptotic tail.
static void BM_MLSeries(benchmark::State& state) {
  const ml::MLParams p{0.7, 1.0, 1e-10};
  for (auto _ : state) benchmark::DoNotOptimize(ml::ml(p, -2.5));
}
BENCHMARK(BM_MLSeries);

static void BM_MLContour(benchmark::State& state) {
  const ml::MLParams p{0.7, 1.0, 1e-10};
  for (auto _ : state) benchmark::DoNotOptimize(ml::ml(p, -20.0));
}
BENCHMARK(BM_MLContour);

static void BM_MLContourNearOne(benchmark::State& state) {
  // beta -> 1 squeezes a pole against the integration path; worst case.
  const ml::MLParams p{0.999, 1.0, 1e-10};
  for (auto _ : state) benchmark::DoNotOptimize(ml::ml(p, -20.0));
}
BENCHMARK(BM_MLContourNearOne);

static void BM_MLAsymptotic(benchmark::State& state) {
  const ml::MLParams p{0.7, 1.0, 1e-10};
  for (auto _ : state) benchmark::DoNotOptimize(ml::ml(p, -1e5));
}
BENCHMARK(BM_MLAsymptotic);
