#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "fracspde/frac_calculus.hpp"
#include "fracspde/gamma.hpp"
#include "fracspde/spectral_kernels.hpp"

using namespace fracspde;
using spectral::FourierField;
using spectral::KernelKind;
using spectral::SpatialGrid;

namespace {
const frac::FracOrders kOrders{0.7, 0.4, 0.1};
}

TEST_CASE("grid invariants") {
  CHECK_THROWS_AS(SpatialGrid(0, 1.0, 8), std::invalid_argument);
  CHECK_THROWS_AS(SpatialGrid(1, 1.0, 7), std::invalid_argument);
  CHECK_THROWS_AS(SpatialGrid(1, 0.0, 8), std::invalid_argument);
  SpatialGrid g(2, 2.0 * M_PI, 8);
  CHECK(g.total_points() == 64);
  CHECK(g.max_level() == 32);
  CHECK(g.mode_level(g.flatten_modes({-4, 3, 0})) == 25);
}

TEST_CASE("symbol trivia: lambda = 0 and gamma = beta") {
  for (double t : {0.1, 0.5, 2.0}) {
    CHECK(spectral::kernel_symbol(KernelKind::P, kOrders, t, 0.0) ==
          doctest::Approx(1.0).epsilon(1e-13));
  }
  frac::FracOrders eq{0.6, 0.6, 0.1};
  for (double t : {0.2, 1.0}) {
    for (double lam : {0.0, 1.0, 9.0}) {
      CHECK(spectral::kernel_symbol(KernelKind::PBG, eq, t, lam) ==
            doctest::Approx(spectral::kernel_symbol(KernelKind::P, eq, t, lam)).epsilon(1e-12));
    }
  }
  frac::FracOrders bad{0.4, 0.95, 0.1};
  CHECK_THROWS_AS(spectral::kernel_symbol(KernelKind::P, bad, 1.0, 1.0), std::domain_error);
}

TEST_CASE("q symbol at lambda = 0 is the k_beta kernel") {
  for (double t : {0.25, 1.0, 3.0}) {
    CHECK(spectral::kernel_symbol(KernelKind::Q, kOrders, t, 0.0) ==
          doctest::Approx(frac::kernel_k(kOrders.beta, t)).epsilon(1e-12));
  }
}

TEST_CASE("q symbol equals the discrete D^(1-beta) of the p path") {
  const double beta = 0.7, lambda = 4.0;
  frac::FracOrders o{beta, 0.4, 0.1};
  frac::TimeGrid grid(1.0, 4096);
  auto p_path = frac::RealPath::sample(grid, [&](double t) {
    return t == 0.0 ? 1.0 : spectral::kernel_symbol(KernelKind::P, o, t, lambda);
  });
  auto d = frac::rl_derivative(1.0 - beta, p_path);
  double worst = 0.0;
  for (int j = grid.steps / 8; j < grid.steps; ++j) {
    const double q = spectral::kernel_symbol(KernelKind::Q, o, grid.node(j), lambda);
    worst = std::max(worst, std::abs(d.values[j] - q));
  }
  CHECK(worst <= 2e-3);
}

TEST_CASE("fractional heat law per mode: d^beta p = -lambda p") {
  const double lambda = 2.5;
  frac::TimeGrid grid(1.0, 2048);
  auto p_path = frac::RealPath::sample(grid, [&](double t) {
    return t == 0.0 ? 1.0 : spectral::kernel_symbol(KernelKind::P, kOrders, t, lambda);
  });
  auto c = frac::caputo_derivative(kOrders.beta, p_path);
  double worst = 0.0;
  for (int j = grid.steps / 8; j <= grid.steps; ++j) {
    worst = std::max(worst, std::abs(c.values[j] + lambda * p_path.values[j]));
  }
  CHECK(worst <= 5e-3);
}

TEST_CASE("Laplacian of q equals the time derivative of p, mode-wise") {
  // -lambda q(t, lambda) vs centered differences of p; the finite-difference
  // mismatch should shrink by ~4x per step halving.
  const double lambda = 3.0, t = 0.6;
  auto p_at = [&](double s) { return spectral::kernel_symbol(KernelKind::P, kOrders, s, lambda); };
  const double q = spectral::kernel_symbol(KernelKind::Q, kOrders, t, lambda);
  double err_prev = -1.0;
  for (double dt : {1e-2, 5e-3, 2.5e-3}) {
    const double fd = (p_at(t + dt) - p_at(t - dt)) / (2.0 * dt);
    const double err = std::abs(-lambda * q - fd);
    if (err_prev > 0.0) CHECK(err <= 0.30 * err_prev + 1e-12);
    err_prev = err;
  }
  CHECK(err_prev <= 1e-5);
}

TEST_CASE("small-t limits of the symbols") {
  const double lambda = 7.0;
  frac::FracOrders o{0.6, 0.8, 0.1};
  double prev_gap = 1e300;
  double prev_scaled_gap = 1e300;
  const double limit = rgamma(1.0 + o.beta - o.gamma);
  for (double t : {1e-2, 1e-5, 1e-8}) {
    const double p = spectral::kernel_symbol(KernelKind::P, o, t, lambda);
    CHECK(std::abs(p - 1.0) < prev_gap);
    prev_gap = std::abs(p - 1.0);
    const double scaled = std::pow(t, o.gamma - o.beta) *
                          spectral::kernel_symbol(KernelKind::PBG, o, t, lambda);
    CHECK(std::abs(scaled - limit) < prev_scaled_gap);
    prev_scaled_gap = std::abs(scaled - limit);
  }
  CHECK(prev_gap <= 1e-3);
  CHECK(prev_scaled_gap <= 1e-3);
}

TEST_CASE("monotone decay of p in lambda") {
  for (double t : {0.3, 1.0}) {
    double prev = 1.0 + 1e-12;
    for (double lam = 0.0; lam <= 40.0; lam += 2.5) {
      const double v = spectral::kernel_symbol(KernelKind::P, kOrders, t, lam);
      CHECK(v <= prev + 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("Caputo and Riemann-Liouville forms of P differ by the initial kernel term") {
  // For beta < gamma the Caputo variant equals the symbol minus
  // p(0) t^(beta-gamma)/Gamma(1+beta-gamma); check both sides discretely.
  frac::FracOrders o{0.5, 0.8, 0.1};
  const double lambda = 3.0;
  const double a = o.gamma - o.beta;
  frac::TimeGrid grid(1.0, 4096);
  auto p_path = frac::RealPath::sample(grid, [&](double t) {
    return t == 0.0 ? 1.0 : spectral::kernel_symbol(KernelKind::P, o, t, lambda);
  });
  auto cap = frac::caputo_derivative(a, p_path);
  double worst = 0.0;
  for (int j = grid.steps / 4; j < grid.steps; ++j) {
    const double t = grid.node(j);
    const double rl = spectral::kernel_symbol(KernelKind::PBG, o, t, lambda);
    const double corr = std::pow(t, o.beta - o.gamma) * rgamma(1.0 + o.beta - o.gamma);
    worst = std::max(worst, std::abs(cap.values[j] - (rl - corr)));
  }
  CHECK(worst <= 2e-3);
}

TEST_CASE("kernel fields: unit mean, Hermitian symmetry, table consistency") {
  SpatialGrid g(2, 2.0 * M_PI, 8);
  auto f = spectral::kernel_field(KernelKind::P, kOrders, 0.4, g);
  CHECK(f.at({0, 0, 0}).real() == doctest::Approx(1.0).epsilon(1e-13));
  auto grid_vals = spectral::to_grid(f);
  std::complex<double> mean{};
  for (const auto& v : grid_vals) mean += v;
  mean /= double(g.total_points());
  CHECK(mean.real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(spectral::hermitian_defect(f) <= 1e-14);

  frac::TimeGrid tg(0.8, 16);
  spectral::KernelTable table(kOrders, tg, g);
  for (int m : {1, 7, 16}) {
    for (std::int64_t lvl : {0, 1, 9, 25}) {
      CHECK(table.p(m, lvl) == doctest::Approx(spectral::kernel_symbol(
                                   KernelKind::P, kOrders, tg.node(m), g.lambda_of_level(lvl)))
                                   .epsilon(1e-12));
      CHECK(table.pbg(m, lvl) == doctest::Approx(spectral::kernel_symbol(
                                     KernelKind::PBG, kOrders, tg.node(m), g.lambda_of_level(lvl)))
                                     .epsilon(1e-12));
    }
  }
}

TEST_CASE("classical proxy: beta -> 1 field approaches the heat kernel") {
  frac::FracOrders o{0.999, 0.5, 0.1};
  SpatialGrid g(2, 2.0 * M_PI, 16);
  const double t = 0.5;
  auto f = spectral::kernel_field(KernelKind::P, o, t, g);
  double worst = 0.0;
  for (std::int64_t i = 0; i < g.total_points(); ++i) {
    const double lam = g.lambda_of_level(g.mode_level(i));
    worst = std::max(worst, std::abs(f.modes[i].real() - std::exp(-lam * t)));
  }
  CHECK(worst <= 0.01); // relative to the sup mode, which is 1
}

TEST_CASE("Parseval and transform round trip") {
  SpatialGrid g(2, 4.0, 8);
  FourierField f(g);
  f.at({1, 0, 0}) = {0.3, -0.2};
  f.at({-2, 3, 0}) = {1.0, 0.7};
  f.at({0, 0, 0}) = 0.5;
  auto vals = spectral::to_grid(f);
  double quad = 0.0;
  const double cell = std::pow(g.length / g.points, g.dim);
  for (const auto& v : vals) quad += std::norm(v) * cell;
  CHECK(std::sqrt(quad) == doctest::Approx(spectral::l2_norm(f)).epsilon(1e-12));

  auto back = spectral::from_grid(g, vals);
  for (std::int64_t i = 0; i < g.total_points(); ++i) {
    CHECK(std::abs(back.modes[i] - f.modes[i]) <= 1e-13);
  }
}

TEST_CASE("derivative and laplacian multipliers") {
  SpatialGrid g(1, 2.0 * M_PI, 16);
  FourierField f(g);
  f.at({3, 0, 0}) = 1.0;
  auto d = spectral::derivative(f, 0);
  CHECK(std::abs(d.at({3, 0, 0}) - std::complex<double>(0.0, 3.0)) <= 1e-14);
  auto l = spectral::laplacian(f);
  CHECK(l.at({3, 0, 0}).real() == doctest::Approx(-9.0).epsilon(1e-13));
}
