#include "fracspde/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "fracspde/quadrature.hpp"
#include "fracspde/rng.hpp"

namespace fracspde::rng {

namespace {
constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void round_once(std::array<std::uint32_t, 4>& c, std::array<std::uint32_t, 2>& k) {
  const std::uint64_t p0 = std::uint64_t(kM0) * c[0];
  const std::uint64_t p1 = std::uint64_t(kM1) * c[2];
  const std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
  const std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
  c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  k[0] += kW0;
  k[1] += kW1;
}
} // namespace

std::array<std::uint32_t, 4> Philox4x32::block(const std::array<std::uint32_t, 4>& counter,
                                               const std::array<std::uint32_t, 2>& key) {
  auto c = counter;
  auto k = key;
  for (int r = 0; r < 10; ++r) round_once(c, k);
  return c;
}

namespace {
inline std::array<std::uint32_t, 4> draw_block(std::uint64_t seed, std::uint64_t stream,
                                               std::uint64_t step, std::uint64_t sample) {
  // 128-bit counter: (step, stream low, stream high ^ sample low, sample high)
  const std::array<std::uint32_t, 4> counter{
      std::uint32_t(step), std::uint32_t(step >> 32),
      std::uint32_t(stream) ^ std::uint32_t(sample << 16),
      std::uint32_t(stream >> 32) ^ std::uint32_t(sample >> 16)};
  const std::array<std::uint32_t, 2> key{std::uint32_t(seed), std::uint32_t(seed >> 32)};
  return Philox4x32::block(counter, key);
}

inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t u = (std::uint64_t(hi) << 32) | lo;
  // (u + 1/2) / 2^64 in (0,1); never exactly 0 or 1.
  return (double(u) + 0.5) * (1.0 / 18446744073709551616.0);
}
} // namespace

double uniform_draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t step,
                    std::uint64_t sample) {
  auto b = draw_block(seed, stream, step, sample);
  return to_unit(b[0], b[1]);
}

double normal_draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t step,
                   std::uint64_t sample) {
  auto b = draw_block(seed, stream, step, sample);
  const double u1 = to_unit(b[0], b[1]);
  const double u2 = to_unit(b[2], b[3]);
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

} // namespace fracspde::rng

namespace fracspde::noise {

NoiseRealization sample_wiener(const NoiseSpec& spec, const frac::TimeGrid& grid,
                               std::uint64_t sample_index, std::size_t max_entries) {
  if (spec.mode_count < 1) throw std::invalid_argument("sample_wiener: mode_count must be >= 1");
  const std::size_t total = std::size_t(spec.mode_count) * std::size_t(grid.steps);
  if (total > max_entries) {
    throw std::runtime_error("sample_wiener: K*N = " + std::to_string(total) +
                             " exceeds the memory budget of " + std::to_string(max_entries));
  }
  NoiseRealization r;
  r.spec = spec;
  r.grid = grid;
  r.sample_index = sample_index;
  r.increments.resize(total);
  const double sqrt_h = std::sqrt(grid.dt());
  for (int k = 0; k < spec.mode_count; ++k) {
    const std::size_t base = std::size_t(k) * grid.steps;
    for (int j = 0; j < grid.steps; ++j) {
      r.increments[base + j] =
          sqrt_h * rng::normal_draw(spec.seed, std::uint64_t(k), std::uint64_t(j), sample_index);
    }
  }
  return r;
}

spectral::FourierField white_basis_function(const spectral::SpatialGrid& grid, int k) {
  const std::int64_t total = grid.total_points();
  if (k < 0 || k >= total) throw std::domain_error("white_basis_function: index beyond basis size");
  // Enumerate modes in flat order; pair each m with -m. The first of a pair
  // (smaller flat index) is the cosine member, the second the sine member.
  // Self-paired modes (all components 0 or -n/2) are single real modes.
  spectral::FourierField f(grid);
  const double volume = std::pow(grid.length, grid.dim);
  const double base = 1.0 / std::sqrt(volume);

  // Walk flat indices, assigning basis slots in order.
  int slot = 0;
  for (std::int64_t i = 0; i < total; ++i) {
    auto m = grid.unflatten(i);
    std::array<int, 3> neg{0, 0, 0};
    bool self = true;
    for (int d = 0; d < grid.dim; ++d) {
      neg[d] = (m[d] == -grid.points / 2) ? m[d] : -m[d];
      if (neg[d] != m[d]) self = false;
    }
    const std::int64_t ineg = grid.flatten_modes(neg);
    if (self) {
      if (slot == k) { f.modes[i] = base; return f; }
      ++slot;
    } else if (ineg > i) {
      // cosine member sqrt(2) L^(-d/2) cos(xi x): coefficients sqrt(2)/2 base
      // on +-m (cos = (e^{i xi x} + e^{-i xi x})/2).
      if (slot == k) {
        f.modes[i] = std::sqrt(2.0) * base * 0.5;
        f.at(neg) = std::sqrt(2.0) * base * 0.5;
        return f;
      }
      ++slot;
      // sine member sqrt(2) L^(-d/2) sin(xi x): -+ i sqrt(2)/2 base on +-m.
      if (slot == k) {
        f.modes[i] = std::complex<double>(0.0, -std::sqrt(2.0) * base * 0.5);
        f.at(neg) = std::complex<double>(0.0, std::sqrt(2.0) * base * 0.5);
        return f;
      }
      ++slot;
    }
  }
  throw std::logic_error("white_basis_function: enumeration exhausted early");
}

std::vector<spectral::FourierField> white_noise_coefficients(
    const NoiseSpec& spec, const spectral::SpatialGrid& grid,
    const spectral::FourierField& h_field) {
  if (spec.basis != Basis::SpacetimeWhite)
    throw std::domain_error("white_noise_coefficients: spec.basis must be SpacetimeWhite");
  if (spec.mode_count > grid.total_points())
    throw std::domain_error("white_noise_coefficients: K exceeds basis size");
  std::vector<spectral::FourierField> out;
  out.reserve(spec.mode_count);
  for (int k = 0; k < spec.mode_count; ++k) {
    out.push_back(spectral::grid_product(h_field, white_basis_function(grid, k)));
  }
  return out;
}

double ito_isometry_oracle(const std::function<double(double)>& kernel, double t,
                           double singular_exponent, double abs_tol) {
  if (!(t > 0.0)) throw std::domain_error("ito_isometry_oracle: t must be positive");
  if (2.0 * singular_exponent <= -1.0)
    throw std::domain_error("ito_isometry_oracle: kernel^2 not integrable (2p <= -1)");
  auto f2 = [&](double s) { const double v = kernel(s); return v * v; };
  auto res = quad::integrate_power_endpoint(f2, t, 2.0 * singular_exponent, abs_tol, 8000);
  return res.value;
}

} // namespace fracspde::noise
