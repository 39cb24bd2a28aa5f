#include <benchmark/benchmark.h>

#include "fracspde/mild_solver.hpp"
#include "fracspde/rng.hpp"
#include "fracspde/spectral_kernels.hpp"

using namespace fracspde;

static void BM_PhiloxNormal(benchmark::State& state) {
  std::uint64_t j = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rng::normal_draw(42, 1, j++, 0));
  }
}
BENCHMARK(BM_PhiloxNormal);

static void BM_KernelTable(benchmark::State& state) {
  const frac::FracOrders orders{0.7, 0.4, 0.1};
  frac::TimeGrid tgrid(1.0, static_cast<int>(state.range(0)));
  spectral::SpatialGrid sgrid(1, 2.0 * 3.141592653589793, 32);
  for (auto _ : state) {
    spectral::KernelTable table(orders, tgrid, sgrid);
    benchmark::DoNotOptimize(table.p(1, 0));
  }
}
BENCHMARK(BM_KernelTable)->Arg(128)->Arg(512);

static void BM_SolveModel(benchmark::State& state) {
  solver::ModelProblem p;
  p.orders = frac::FracOrders{0.7, 0.4, 0.1};
  p.tgrid = frac::TimeGrid(1.0, static_cast<int>(state.range(0)));
  p.sgrid = spectral::SpatialGrid(1, 2.0 * 3.141592653589793, 16);
  p.u0 = spectral::FourierField(p.sgrid);
  p.u0.at({1, 0, 0}) = 1.0;
  p.g.emplace_back(p.sgrid);
  p.g[0].at({2, 0, 0}) = 0.5;
  p.noise_spec.mode_count = 1;
  spectral::KernelTable table(p.orders, p.tgrid, p.sgrid);
  auto nr = noise::sample_wiener(p.noise_spec, p.tgrid, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solver::solve_model(p, table, nr, false));
  }
}
BENCHMARK(BM_SolveModel)->Arg(256)->Arg(1024);
