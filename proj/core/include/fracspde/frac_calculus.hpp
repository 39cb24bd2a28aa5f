#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace fracspde::frac {

// Uniform grid t_j = j * horizon / steps, j = 0..steps.
struct TimeGrid {
  double horizon = 1.0;
  int steps = 2;

  TimeGrid() = default;
  TimeGrid(double horizon_, int steps_) : horizon(horizon_), steps(steps_) {
    if (!(horizon > 0.0)) throw std::invalid_argument("TimeGrid: horizon must be positive");
    if (steps < 2) throw std::invalid_argument("TimeGrid: need at least 2 steps");
  }
  double dt() const { return horizon / steps; }
  double node(int j) const { return j * dt(); }
  int nodes() const { return steps + 1; }
  bool operator==(const TimeGrid& o) const
  { return horizon == o.horizon && steps == o.steps; }
};

// A scalar function sampled on a TimeGrid; values[j] = phi(t_j).
template <class T>
struct SampledPath {
  TimeGrid grid;
  std::vector<T> values;

  SampledPath() = default;
  SampledPath(TimeGrid g, std::vector<T> v) : grid(g), values(std::move(v)) {
    if (static_cast<int>(values.size()) != grid.nodes())
      throw std::invalid_argument("SampledPath: value count must equal steps+1");
  }
  static SampledPath sample(TimeGrid g, const std::function<T(double)>& fn) {
    std::vector<T> v(g.nodes());
    for (int j = 0; j < g.nodes(); ++j) v[j] = fn(g.node(j));
    return SampledPath(g, std::move(v));
  }
};

using RealPath = SampledPath<double>;
using ComplexPath = SampledPath<std::complex<double>>;

// The fractional order pair (beta, gamma) with the derived exponents the
// solvability theory runs on. eps0 only matters when gamma == 1/2 exactly.
struct FracOrders {
  double beta = 0.5;
  double gamma = 0.25;
  double eps0 = 0.1;

  double gamma0() const {
    const double num = 2.0 * gamma - 1.0;
    return num > 0.0 ? num / beta : 0.0;
  }
  double sigma0() const { return gamma0() + (gamma == 0.5 ? eps0 : 0.0); }

  bool in_range() const {
    return beta > 0.0 && beta < 1.0 && gamma > 0.0 && gamma < 1.0 &&
           eps0 > 0.0 && eps0 < 1.0;
  }
  // The standing compatibility condition gamma < beta + 1/2.
  bool compatible() const { return gamma < beta + 0.5; }
  bool valid() const { return in_range() && compatible() && gamma0() < 2.0; }
};

// k_beta(t) = t^(beta-1) / Gamma(beta). Singular at t = 0 for beta < 1;
// non-positive t raises std::domain_error.
double kernel_k(double beta, double t);

// Exact moments of k_beta against a piecewise-linear interpolant: the
// interval [t_(n-m), t_(n-m+1)] contributes A[m] phi_(n-m) + B[m] phi_(n-m+1)
// to I^beta phi (t_n). Index 1..steps used; shared by every convolution-type
// quadrature with a t^(beta-1) factor.
struct ProductIntegrationWeights {
  std::vector<double> A, B;
};
ProductIntegrationWeights product_integration_weights(double beta, const TimeGrid& grid);

// Riemann-Liouville integral I^beta phi by product integration: phi is taken
// piecewise linear between nodes and k_beta is integrated exactly against it
// on every subinterval. Node 0 maps to 0. Exact (up to roundoff) for
// piecewise-linear phi. Uses an FFT convolution above a size cutoff.
RealPath fractional_integral(double beta, const RealPath& path);
ComplexPath fractional_integral(double beta, const ComplexPath& path);

// Riemann-Liouville derivative D^beta phi = d/dt I^(1-beta) phi, realized as
// fractional_integral(1-beta, .) followed by centered differencing (one-sided
// at the right end). Node 0 is filled by linear extrapolation and should be
// treated as low accuracy: the kernel is singular at t = 0.
RealPath rl_derivative(double beta, const RealPath& path);
ComplexPath rl_derivative(double beta, const ComplexPath& path);

// Caputo derivative via the L1 scheme: exact k_(1-beta) moments applied to
// the piecewise-constant difference quotients of phi (equivalently,
// I^(1-beta) of the discrete derivative). Node 0 is exactly 0, which is the
// continuum value for paths with bounded derivative; for data with a
// singular derivative at 0 the first node is unreliable (see rl_derivative).
RealPath caputo_derivative(double beta, const RealPath& path);
ComplexPath caputo_derivative(double beta, const ComplexPath& path);

} // namespace fracspde::frac
