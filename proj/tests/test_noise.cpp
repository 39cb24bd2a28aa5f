#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fracspde/gamma.hpp"
#include "fracspde/mild_solver.hpp"
#include "fracspde/mittag_leffler.hpp"
#include "fracspde/noise.hpp"
#include "fracspde/rng.hpp"

using namespace fracspde;
using noise::Basis;
using noise::NoiseSpec;

TEST_CASE("philox known-answer vectors") {
  // Reference vectors of the published 10-round parameterization.
  auto z = rng::Philox4x32::block({0, 0, 0, 0}, {0, 0});
  CHECK(z[0] == 0x6627e8d5u);
  CHECK(z[1] == 0xe169c58du);
  CHECK(z[2] == 0xbc57ac4cu);
  CHECK(z[3] == 0x9b00dbd8u);
  auto o = rng::Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                  {0xffffffffu, 0xffffffffu});
  CHECK(o[0] == 0x408f276du);
  CHECK(o[1] == 0x41c83b0eu);
  CHECK(o[2] == 0xa20bc7c6u);
  CHECK(o[3] == 0x6d5451fdu);
  auto p = rng::Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                  {0xa4093822u, 0x299f31d0u});
  CHECK(p[0] == 0xd16cfe09u);
  CHECK(p[1] == 0x94fdccebu);
  CHECK(p[2] == 0x5001e420u);
  CHECK(p[3] == 0x24126ea1u);
}

TEST_CASE("same seed gives identical realizations; different streams differ") {
  NoiseSpec spec{4, Basis::IndependentScalar, 77};
  frac::TimeGrid grid(1.0, 128);
  auto a = noise::sample_wiener(spec, grid);
  auto b = noise::sample_wiener(spec, grid);
  CHECK(a.increments == b.increments);
  auto c = noise::sample_wiener(spec, grid, /*sample_index=*/1);
  CHECK(a.increments != c.increments);
  NoiseSpec spec2 = spec;
  spec2.seed = 78;
  auto d = noise::sample_wiener(spec2, grid);
  CHECK(a.increments != d.increments);
}

TEST_CASE("increment law: mean and variance") {
  NoiseSpec spec{1, Basis::IndependentScalar, 424242};
  const int N = 10000;
  frac::TimeGrid grid(10.0, N);
  const double h = grid.dt();
  auto r = noise::sample_wiener(spec, grid);
  double mean = 0.0, var = 0.0;
  for (int j = 0; j < N; ++j) mean += r.dW(0, j);
  mean /= N;
  for (int j = 0; j < N; ++j) var += (r.dW(0, j) - mean) * (r.dW(0, j) - mean);
  var /= (N - 1);
  CHECK(std::abs(mean) <= 4.0 * std::sqrt(h / N));
  CHECK(var == doctest::Approx(h).epsilon(0.05));
}

TEST_CASE("distinct streams are empirically uncorrelated") {
  NoiseSpec spec{3, Basis::IndependentScalar, 1000003};
  const int N = 4096;
  frac::TimeGrid grid(1.0, N);
  auto r = noise::sample_wiener(spec, grid);
  const double h = grid.dt();
  for (int k1 = 0; k1 < 3; ++k1) {
    for (int k2 = k1 + 1; k2 < 3; ++k2) {
      double corr = 0.0;
      for (int j = 0; j < N; ++j) corr += r.dW(k1, j) * r.dW(k2, j);
      corr /= (N * h);
      CHECK(std::abs(corr) <= 4.0 / std::sqrt(double(N)));
    }
  }
}

TEST_CASE("memory budget is a resource error") {
  NoiseSpec spec{1 << 16, Basis::IndependentScalar, 1};
  frac::TimeGrid grid(1.0, 1 << 10);
  CHECK_THROWS_AS(noise::sample_wiener(spec, grid), std::runtime_error);
}

TEST_CASE("white-noise basis is orthonormal and complete on the grid") {
  spectral::SpatialGrid g(1, 2.0 * M_PI, 8);
  const int total = static_cast<int>(g.total_points());
  // orthonormality in L2(torus)
  for (int k1 = 0; k1 < total; ++k1) {
    auto f1 = noise::white_basis_function(g, k1);
    auto v1 = spectral::to_grid(f1);
    for (int k2 = k1; k2 < total; ++k2) {
      auto v2 = spectral::to_grid(noise::white_basis_function(g, k2));
      std::complex<double> ip{};
      const double cell = g.length / g.points;
      for (std::size_t q = 0; q < v1.size(); ++q) ip += v1[q] * std::conj(v2[q]) * cell;
      if (k1 == k2) {
        CHECK(ip.real() == doctest::Approx(1.0).epsilon(1e-12));
      } else {
        CHECK(std::abs(ip) <= 1e-12);
      }
    }
    // basis functions are real fields
    for (const auto& v : v1) CHECK(std::abs(v.imag()) <= 1e-12);
  }
  // completeness: sum_k eta_k(x)^2 = n/L at every grid point (d = 1)
  std::vector<double> acc(g.total_points(), 0.0);
  for (int k = 0; k < total; ++k) {
    auto v = spectral::to_grid(noise::white_basis_function(g, k));
    for (std::size_t q = 0; q < acc.size(); ++q) acc[q] += std::norm(v[q]);
  }
  const double expect = g.points / g.length;
  for (double v : acc) CHECK(v == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("white-noise coefficients: products against direct grid multiplication") {
  spectral::SpatialGrid g(1, 2.0 * M_PI, 8);
  NoiseSpec spec{8, Basis::SpacetimeWhite, 5};
  SUBCASE("h = 0 gives the zero family") {
    spectral::FourierField h(g);
    auto fam = noise::white_noise_coefficients(spec, g, h);
    for (const auto& f : fam)
      for (const auto& m : f.modes) CHECK(std::abs(m) <= 1e-15);
  }
  SUBCASE("h a single mode: modes shift as a two-term convolution") {
    spectral::FourierField h(g);
    h.at({2, 0, 0}) = 1.0;
    auto fam = noise::white_noise_coefficients(spec, g, h);
    auto hg = spectral::to_grid(h);
    for (int k = 0; k < spec.mode_count; ++k) {
      auto eg = spectral::to_grid(noise::white_basis_function(g, k));
      std::vector<std::complex<double>> prod(hg.size());
      for (std::size_t q = 0; q < hg.size(); ++q) prod[q] = hg[q] * eg[q];
      auto direct = spectral::from_grid(g, prod);
      for (std::int64_t i = 0; i < g.total_points(); ++i) {
        CHECK(std::abs(fam[k].modes[i] - direct.modes[i]) <= 1e-12);
      }
    }
  }
  SUBCASE("K beyond the basis size is a domain error") {
    NoiseSpec big{9, Basis::SpacetimeWhite, 5};
    spectral::FourierField h(g);
    CHECK_THROWS_AS(noise::white_noise_coefficients(big, g, h), std::domain_error);
  }
  SUBCASE("completeness factor: h = 1 gives sum_k |g^k|^2 = n/L pointwise") {
    spectral::FourierField h(g);
    h.at({0, 0, 0}) = 1.0;
    auto fam = noise::white_noise_coefficients(spec, g, h);
    std::vector<double> acc(g.total_points(), 0.0);
    for (const auto& f : fam) {
      auto v = spectral::to_grid(f);
      for (std::size_t q = 0; q < acc.size(); ++q) acc[q] += std::norm(v[q]);
    }
    for (double v : acc) CHECK(v == doctest::Approx(g.points / g.length).epsilon(1e-10));
  }
}

TEST_CASE("ito isometry oracle: closed forms") {
  SUBCASE("kernel = 1 gives t") {
    CHECK(noise::ito_isometry_oracle([](double) { return 1.0; }, 2.5) ==
          doctest::Approx(2.5).epsilon(1e-10));
  }
  SUBCASE("power kernel s^(beta-gamma)/Gamma(1+beta-gamma)") {
    // beta = 0.8, gamma = 0.6: 1/(1.4 Gamma(1.2)^2), frozen from mpmath
    const double a = 0.2;
    const double rg = rgamma(1.2);
    auto k = [&](double s) { return std::pow(s, a) * rg; };
    CHECK(noise::ito_isometry_oracle(k, 1.0, a) ==
          doctest::Approx(0.84728000324689731142).epsilon(1e-9));
  }
  SUBCASE("non-integrable kernel is rejected") {
    CHECK_THROWS_AS(
        noise::ito_isometry_oracle([](double s) { return std::pow(s, -0.5); }, 1.0, -0.5),
        std::domain_error);
  }
}

TEST_CASE("truncation monotonicity: more white-noise streams, more variance") {
  spectral::SpatialGrid g(1, 2.0 * M_PI, 8);
  frac::TimeGrid tgrid(1.0, 64);
  frac::FracOrders orders{0.7, 0.45, 0.1};
  spectral::FourierField h(g);
  h.at({0, 0, 0}) = 1.0; // h(x) = 1
  spectral::KernelTable table(orders, tgrid, g);
  double prev = -1.0;
  for (int K : {1, 4, 8}) {
    NoiseSpec spec{K, Basis::SpacetimeWhite, 321};
    auto fam = noise::white_noise_coefficients(spec, g, h);
    solver::ModelProblem p;
    p.orders = orders;
    p.tgrid = tgrid;
    p.sgrid = g;
    p.u0 = spectral::FourierField(g);
    p.f_const = spectral::FourierField(g);
    p.g = fam;
    p.noise_spec = spec;
    const int M = 160;
    double mean = 0.0;
    for (int s = 0; s < M; ++s) {
      auto nr = noise::sample_wiener(spec, tgrid, std::uint64_t(s));
      auto path = solver::solve_model(p, table, nr, false);
      double acc = 0.0;
      for (int j = 0; j <= tgrid.steps; ++j) {
        double ns = 0.0;
        for (std::int64_t i = 0; i < path.mode_count(); ++i) ns += std::norm(path.value(j, i));
        acc += (j == 0 || j == tgrid.steps ? 0.5 : 1.0) * tgrid.dt() * ns;
      }
      mean += acc / M;
    }
    CHECK(mean > prev);
    prev = mean;
  }
}

TEST_CASE("discrete stochastic convolution variance approaches the oracle") {
  // kernel s^(beta-gamma) E_{beta,1+beta-gamma}(-lambda s^beta), the P symbol
  const double beta = 0.8, gamma = 0.6, lambda = 4.0;
  auto kern = [&](double s) {
    return std::pow(s, beta - gamma) *
           ml::ml({beta, 1.0 + beta - gamma, 1e-10}, -lambda * std::pow(s, beta));
  };
  const double oracle = noise::ito_isometry_oracle(kern, 1.0, beta - gamma);

  const int M = 10000;
  const int N = 512;
  frac::TimeGrid grid(1.0, N);
  NoiseSpec spec{1, Basis::IndependentScalar, 901};
  std::vector<double> kv(N + 1);
  for (int m = 1; m <= N; ++m) kv[m] = kern(grid.node(m));
  double sum = 0.0;
  for (int s = 0; s < M; ++s) {
    auto r = noise::sample_wiener(spec, grid, std::uint64_t(s));
    double acc = 0.0;
    for (int j = 0; j < N; ++j) acc += kv[N - j] * r.dW(0, j);
    sum += acc * acc;
  }
  const double mc = sum / M;
  const double stderr_est = mc * std::sqrt(2.0 / M);
  CHECK(std::abs(mc - oracle) <= 3.0 * stderr_est);
}
