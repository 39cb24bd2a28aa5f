#include "fracspde/frac_calculus.hpp"

#include <cmath>

#include "fracspde/dft.hpp"
#include "fracspde/gamma.hpp"

namespace fracspde::frac {

ProductIntegrationWeights product_integration_weights(double beta, const TimeGrid& grid) {
  if (!(beta > 0.0) || beta > 1.0)
    throw std::domain_error("product_integration_weights: beta must lie in (0,1]");
  const int N = grid.steps;
  const double h = grid.dt();
  const double rg1 = rgamma(beta + 1.0);
  const double rg0 = rgamma(beta); // for the first moment
  ProductIntegrationWeights w;
  w.A.assign(N + 1, 0.0);
  w.B.assign(N + 1, 0.0);
  double bpow_prev = 0.0;                   // ((m-1)h)^beta
  double bpow1_prev = 0.0;                  // ((m-1)h)^(beta+1)
  for (int m = 1; m <= N; ++m) {
    const double bm = std::pow(m * h, beta);
    const double bm1 = std::pow(m * h, beta + 1.0);
    const double M0 = (bm - bpow_prev) * rg1;
    const double M1 = (bm1 - bpow1_prev) / (beta + 1.0) * rg0;
    const double D = m * M0 - M1 / h;
    w.A[m] = M0 - D;
    w.B[m] = D;
    bpow_prev = bm;
    bpow1_prev = bm1;
  }
  return w;
}

namespace {

// Above this node count the O(N^2) convolution switches to FFT.
constexpr int kDirectCutoff = 2048;

// out[n] = sum_{m=1..n} A[m] x[n-m] + B[m] x[n-m+1], n = 0..N (out[0] = 0).
template <class T>
std::vector<T> weighted_convolution(const ProductIntegrationWeights& w, const std::vector<T>& x) {
  const int N = static_cast<int>(x.size()) - 1;
  std::vector<T> out(N + 1, T{});
  if (N <= kDirectCutoff) {
    for (int n = 1; n <= N; ++n) {
      T acc{};
      for (int m = 1; m <= n; ++m) {
        acc += w.A[m] * x[n - m] + w.B[m] * x[n - m + 1];
      }
      out[n] = acc;
    }
    return out;
  }
  // FFT path: two linear convolutions sharing the layout
  //   S1[n] = (A * x)[n],  S2[n] = (B * xs)[n] with xs[i] = x[i+1].
  std::vector<std::complex<double>> ka(N + 1), kb(N + 1), xv(N + 1), xs(N);
  for (int m = 0; m <= N; ++m) {
    ka[m] = w.A[m];
    kb[m] = w.B[m];
    xv[m] = x[m];
  }
  for (int i = 0; i < N; ++i) xs[i] = x[i + 1];
  auto c1 = dft::convolve(ka, xv);
  auto c2 = dft::convolve(kb, xs);
  for (int n = 1; n <= N; ++n) {
    std::complex<double> v = c1[n] + c2[n];
    if constexpr (std::is_same_v<T, double>) {
      out[n] = v.real();
    } else {
      out[n] = v;
    }
  }
  return out;
}

template <class T>
SampledPath<T> integral_impl(double beta, const SampledPath<T>& path) {
  if (!(beta > 0.0) || beta > 1.0)
    throw std::domain_error("fractional_integral: beta must lie in (0,1]");
  ProductIntegrationWeights w = product_integration_weights(beta, path.grid);
  return SampledPath<T>(path.grid, weighted_convolution(w, path.values));
}

template <class T>
SampledPath<T> rl_derivative_impl(double beta, const SampledPath<T>& path) {
  if (!(beta > 0.0) || !(beta < 1.0))
    throw std::domain_error("rl_derivative: beta must lie in (0,1)");
  SampledPath<T> psi = integral_impl(1.0 - beta, path);
  const int N = path.grid.steps;
  const double h = path.grid.dt();
  std::vector<T> out(N + 1);
  for (int j = 1; j < N; ++j) out[j] = (psi.values[j + 1] - psi.values[j - 1]) / (2.0 * h);
  out[N] = (3.0 * psi.values[N] - 4.0 * psi.values[N - 1] + psi.values[N - 2]) / (2.0 * h);
  out[0] = 2.0 * out[1] - out[2]; // extrapolated; low accuracy by construction
  return SampledPath<T>(path.grid, std::move(out));
}

template <class T>
SampledPath<T> caputo_impl(double beta, const SampledPath<T>& path) {
  if (!(beta > 0.0) || !(beta < 1.0))
    throw std::domain_error("caputo_derivative: beta must lie in (0,1)");
  const int N = path.grid.steps;
  const double h = path.grid.dt();
  // L1 weights: w[m] = ((mh)^(1-beta) - ((m-1)h)^(1-beta)) / Gamma(2-beta)
  // applied to difference quotients.
  const double rg = rgamma(2.0 - beta);
  std::vector<double> wm(N + 1, 0.0);
  double prev = 0.0;
  for (int m = 1; m <= N; ++m) {
    const double cur = std::pow(m * h, 1.0 - beta);
    wm[m] = (cur - prev) * rg;
    prev = cur;
  }
  std::vector<T> slope(N);
  for (int j = 0; j < N; ++j) slope[j] = (path.values[j + 1] - path.values[j]) / h;

  std::vector<T> out(N + 1, T{});
  if (N <= kDirectCutoff) {
    for (int n = 1; n <= N; ++n) {
      T acc{};
      for (int m = 1; m <= n; ++m) acc += wm[m] * slope[n - m];
      out[n] = acc;
    }
  } else {
    // sum_{m=1..n} wm[m] slope[n-m] is the n-th coefficient of the linear
    // convolution (wm * slope), since wm[0] = 0.
    std::vector<std::complex<double>> kw(N + 1), sv(N);
    for (int m = 0; m <= N; ++m) kw[m] = wm[m];
    for (int j = 0; j < N; ++j) sv[j] = slope[j];
    auto c = dft::convolve(kw, sv);
    for (int n = 1; n <= N; ++n) {
      if constexpr (std::is_same_v<T, double>) out[n] = c[n].real();
      else out[n] = c[n];
    }
  }
  return SampledPath<T>(path.grid, std::move(out));
}

} // namespace

double kernel_k(double beta, double t) {
  if (!(beta > 0.0) || beta > 1.0)
    throw std::domain_error("kernel_k: beta must lie in (0,1]");
  if (!(t > 0.0))
    throw std::domain_error("kernel_k: t must be positive (kernel singular at 0)");
  return std::pow(t, beta - 1.0) * rgamma(beta);
}

RealPath fractional_integral(double beta, const RealPath& path) { return integral_impl(beta, path); }
ComplexPath fractional_integral(double beta, const ComplexPath& path) { return integral_impl(beta, path); }

RealPath rl_derivative(double beta, const RealPath& path) { return rl_derivative_impl(beta, path); }
ComplexPath rl_derivative(double beta, const ComplexPath& path) { return rl_derivative_impl(beta, path); }

RealPath caputo_derivative(double beta, const RealPath& path) { return caputo_impl(beta, path); }
ComplexPath caputo_derivative(double beta, const ComplexPath& path) { return caputo_impl(beta, path); }

} // namespace fracspde::frac
