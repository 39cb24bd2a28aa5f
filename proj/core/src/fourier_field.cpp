#include "fracspde/fourier_field.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

#include "fracspde/dft.hpp"

namespace fracspde::dft {

namespace {

// FFTW plan creation is not thread-safe; executions on distinct buffers are.
// Plans are created FFTW_UNALIGNED so the new-array execute interface can
// run on any caller buffer.
std::mutex g_plan_mutex;
std::map<std::pair<std::vector<int>, int>, fftw_plan> g_plans;

fftw_plan plan_for(const std::vector<int>& dims, int sign, fftw_complex* buf) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto key = std::make_pair(dims, sign);
  auto it = g_plans.find(key);
  if (it != g_plans.end()) return it->second;
  fftw_plan p = fftw_plan_dft(static_cast<int>(dims.size()),
                              const_cast<int*>(dims.data()), buf, buf,
                              sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  g_plans.emplace(key, p);
  return p;
}

} // namespace

void transform(std::vector<std::complex<double>>& data,
               const std::vector<int>& dims, int sign) {
  std::size_t total = 1;
  for (int d : dims) total *= static_cast<std::size_t>(d);
  if (total != data.size())
    throw std::invalid_argument("dft::transform: size/dims mismatch");
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan p = plan_for(dims, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, buf);
  fftw_execute_dft(p, buf, buf);
}

std::vector<std::complex<double>> convolve(
    const std::vector<std::complex<double>>& a,
    const std::vector<std::complex<double>>& b) {
  const std::size_t out_len = a.size() + b.size() - 1;
  std::size_t p = 1;
  while (p < out_len) p <<= 1;
  std::vector<std::complex<double>> fa(p, 0.0), fb(p, 0.0);
  std::copy(a.begin(), a.end(), fa.begin());
  std::copy(b.begin(), b.end(), fb.begin());
  const std::vector<int> dims{static_cast<int>(p)};
  transform(fa, dims, -1);
  transform(fb, dims, -1);
  for (std::size_t i = 0; i < p; ++i) fa[i] *= fb[i] / double(p);
  transform(fa, dims, +1);
  fa.resize(out_len);
  return fa;
}

} // namespace fracspde::dft

namespace fracspde::spectral {

FourierField& FourierField::operator+=(const FourierField& o) {
  if (!(grid == o.grid)) throw std::invalid_argument("FourierField: grid mismatch");
  for (std::size_t i = 0; i < modes.size(); ++i) modes[i] += o.modes[i];
  return *this;
}

FourierField& FourierField::operator*=(double s) {
  for (auto& m : modes) m *= s;
  return *this;
}

FourierField operator+(FourierField a, const FourierField& b) { return a += b; }
FourierField operator*(double s, FourierField a) { return a *= s; }

namespace {
std::vector<int> dims_of(const SpatialGrid& g) {
  return std::vector<int>(static_cast<std::size_t>(g.dim), g.points);
}
} // namespace

std::vector<std::complex<double>> to_grid(const FourierField& f) {
  // Backward FFT of coefficients is exactly sum_m u_m e^{+i xi_m . x_j}.
  std::vector<std::complex<double>> out = f.modes;
  dft::transform(out, dims_of(f.grid), +1);
  return out;
}

FourierField from_grid(const SpatialGrid& g, const std::vector<std::complex<double>>& values) {
  if (static_cast<std::int64_t>(values.size()) != g.total_points())
    throw std::invalid_argument("from_grid: size mismatch");
  FourierField f(g);
  f.modes = values;
  dft::transform(f.modes, dims_of(g), -1);
  const double scale = 1.0 / double(g.total_points());
  for (auto& m : f.modes) m *= scale;
  return f;
}

FourierField grid_product(const FourierField& a, const FourierField& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("grid_product: grid mismatch");
  auto ga = to_grid(a);
  auto gb = to_grid(b);
  for (std::size_t i = 0; i < ga.size(); ++i) ga[i] *= gb[i];
  return from_grid(a.grid, ga);
}

FourierField derivative(const FourierField& f, int axis) {
  if (axis < 0 || axis >= f.grid.dim) throw std::invalid_argument("derivative: bad axis");
  FourierField out = f;
  const double w = std::sqrt(f.grid.mode_factor());
  for (std::int64_t i = 0; i < f.grid.total_points(); ++i) {
    auto m = f.grid.unflatten(i);
    out.modes[i] *= std::complex<double>(0.0, w * m[axis]);
  }
  return out;
}

FourierField laplacian(const FourierField& f) {
  FourierField out = f;
  for (std::int64_t i = 0; i < f.grid.total_points(); ++i) {
    out.modes[i] *= -f.grid.lambda_of_level(f.grid.mode_level(i));
  }
  return out;
}

double hermitian_defect(const FourierField& f) {
  double max_mag = 0.0, max_dev = 0.0;
  for (std::int64_t i = 0; i < f.grid.total_points(); ++i) {
    max_mag = std::max(max_mag, std::abs(f.modes[i]));
  }
  if (max_mag == 0.0) return 0.0;
  for (std::int64_t i = 0; i < f.grid.total_points(); ++i) {
    auto m = f.grid.unflatten(i);
    std::array<int, 3> neg{0, 0, 0};
    bool has_partner = true;
    for (int d = 0; d < f.grid.dim; ++d) {
      if (m[d] == -f.grid.points / 2) { has_partner = false; break; } // no mirror mode
      neg[d] = -m[d];
    }
    if (!has_partner) continue;
    const auto& a = f.modes[i];
    const auto& b = f.at(neg);
    max_dev = std::max(max_dev, std::abs(a - std::conj(b)));
  }
  return max_dev / max_mag;
}

double l2_norm(const FourierField& f) {
  double s = 0.0;
  for (const auto& m : f.modes) s += std::norm(m);
  return std::sqrt(s * std::pow(f.grid.length, f.grid.dim));
}

} // namespace fracspde::spectral
