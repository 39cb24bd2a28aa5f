#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fracspde/fourier_field.hpp"
#include "fracspde/frac_calculus.hpp"

namespace fracspde::noise {

enum class Basis { IndependentScalar, SpacetimeWhite };

struct NoiseSpec {
  int mode_count = 64;   // K, truncation of the l2 sum
  Basis basis = Basis::IndependentScalar;
  std::uint64_t seed = 0;
};

// Brownian increments dW^k_j ~ N(0, h), independent over (k, j), K x N.
// Bit-reproducible for a fixed (seed, sample_index) regardless of scheduling.
struct NoiseRealization {
  NoiseSpec spec;
  frac::TimeGrid grid;
  std::uint64_t sample_index = 0;
  std::vector<double> increments; // row k, column j: increments[k*N + j]

  double dW(int k, int j) const { return increments[static_cast<std::size_t>(k) * grid.steps + j]; }
};

// Draw a realization. Streams are derived per (k, sample_index) through the
// counter-based generator; no sequential RNG state exists.
// Throws a resource error if K*N exceeds max_entries.
NoiseRealization sample_wiener(const NoiseSpec& spec, const frac::TimeGrid& grid,
                               std::uint64_t sample_index = 0,
                               std::size_t max_entries = std::size_t(1) << 24);

// Orthonormal real Fourier basis eta^k on the torus, k = 0..(n^d - 1):
//   k = 0                 -> L^(-d/2)
//   paired +-m (m != 0)   -> sqrt(2) L^(-d/2) cos(xi_m x), sqrt(2) L^(-d/2) sin(xi_m x)
//   self-paired m = -n/2  -> L^(-d/2) cos(xi_m x)  (real single mode)
// Returned in mode space.
spectral::FourierField white_basis_function(const spectral::SpatialGrid& grid, int k);

// g^k = h_field * eta^k for k = 0..K-1, products taken on the grid
// (equivalently aliased mode convolution). K must not exceed the basis size.
std::vector<spectral::FourierField> white_noise_coefficients(
    const NoiseSpec& spec, const spectral::SpatialGrid& grid,
    const spectral::FourierField& h_field);

// int_0^t kernel(s)^2 ds with singular-endpoint handling: kernel ~ s^p near
// 0 (p = singular_exponent, must satisfy 2p > -1). This is the ground truth
// for second moments of the stochastic convolution int_0^t kernel(t-s) dW_s.
double ito_isometry_oracle(const std::function<double(double)>& kernel, double t,
                           double singular_exponent = 0.0, double abs_tol = 1e-10);

} // namespace fracspde::noise
