#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace fracspde::spectral {

// Periodic box [0, L)^d sampled on n points per dimension. Fourier modes are
// xi_m = (2 pi / L) m with m in {-n/2, ..., n/2 - 1} per dimension; storage
// follows FFT index order (index k maps to m = k < n/2 ? k : k - n).
struct SpatialGrid {
  int dim = 1;
  double length = 2.0 * 3.141592653589793238462643383279502884;
  int points = 4; // per dimension, even

  SpatialGrid() = default;
  SpatialGrid(int dim_, double length_, int points_)
      : dim(dim_), length(length_), points(points_) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("SpatialGrid: dim must be 1, 2 or 3");
    if (!(length > 0.0)) throw std::invalid_argument("SpatialGrid: length must be positive");
    if (points < 4 || points % 2 != 0)
      throw std::invalid_argument("SpatialGrid: points must be even and >= 4");
  }

  std::int64_t total_points() const {
    std::int64_t t = 1;
    for (int i = 0; i < dim; ++i) t *= points;
    return t;
  }
  double mode_factor() const { // (2 pi / L)^2, scaling m -> |xi|^2
    const double w = 2.0 * 3.141592653589793238462643383279502884 / length;
    return w * w;
  }
  // m_i of the flat index, each in [-n/2, n/2).
  std::array<int, 3> unflatten(std::int64_t idx) const {
    std::array<int, 3> m{0, 0, 0};
    for (int i = dim - 1; i >= 0; --i) {
      int k = static_cast<int>(idx % points);
      idx /= points;
      m[i] = k < points / 2 ? k : k - points;
    }
    return m;
  }
  std::int64_t flatten_modes(const std::array<int, 3>& m) const {
    std::int64_t idx = 0;
    for (int i = 0; i < dim; ++i) {
      int k = m[i] < 0 ? m[i] + points : m[i];
      if (k < 0 || k >= points) throw std::out_of_range("SpatialGrid: mode out of range");
      idx = idx * points + k;
    }
    return idx;
  }
  // Integer |m|^2 of a flat index; |xi|^2 = mode_factor() * that.
  std::int64_t mode_level(std::int64_t idx) const {
    auto m = unflatten(idx);
    std::int64_t s = 0;
    for (int i = 0; i < dim; ++i) s += std::int64_t(m[i]) * m[i];
    return s;
  }
  std::int64_t max_level() const {
    std::int64_t half = points / 2;
    return dim * half * half;
  }
  double lambda_of_level(std::int64_t level) const { return mode_factor() * double(level); }
  bool operator==(const SpatialGrid& o) const
  { return dim == o.dim && length == o.length && points == o.points; }
};

// Complex Fourier coefficients over all modes of a SpatialGrid, with
// real-space synthesis u(x_j) = sum_m u_hat_m exp(i xi_m . x_j).
struct FourierField {
  SpatialGrid grid;
  std::vector<std::complex<double>> modes;

  FourierField() = default;
  explicit FourierField(const SpatialGrid& g)
      : grid(g), modes(static_cast<std::size_t>(g.total_points())) {}
  FourierField(const SpatialGrid& g, std::vector<std::complex<double>> m)
      : grid(g), modes(std::move(m)) {
    if (static_cast<std::int64_t>(modes.size()) != g.total_points())
      throw std::invalid_argument("FourierField: coefficient count mismatch");
  }

  std::complex<double>& at(const std::array<int, 3>& m) { return modes[grid.flatten_modes(m)]; }
  const std::complex<double>& at(const std::array<int, 3>& m) const { return modes[grid.flatten_modes(m)]; }

  FourierField& operator+=(const FourierField& o);
  FourierField& operator*=(double s);
};

FourierField operator+(FourierField a, const FourierField& b);
FourierField operator*(double s, FourierField a);

// Real-space samples u(x_j) (row-major over the grid).
std::vector<std::complex<double>> to_grid(const FourierField& f);
// Inverse: modes from real-space samples.
FourierField from_grid(const SpatialGrid& g, const std::vector<std::complex<double>>& values);

// Pointwise product on the grid, returned in mode space. Both inputs in mode
// space; this is the (aliased) discrete convolution of coefficients.
FourierField grid_product(const FourierField& a, const FourierField& b);

// Derivative along axis: multiply by (i xi_axis).
FourierField derivative(const FourierField& f, int axis);
// Laplacian: multiply by -|xi|^2.
FourierField laplacian(const FourierField& f);

// Max deviation from Hermitian symmetry u_hat(-m) == conj(u_hat(m)),
// normalized by the largest coefficient magnitude. 0 for real fields.
double hermitian_defect(const FourierField& f);

// l2 norm of coefficients scaled by L^(d/2): equals the L2(torus) norm of the
// synthesized field (Parseval). Matches grid quadrature of |u|^2 exactly.
double l2_norm(const FourierField& f);

} // namespace fracspde::spectral
