#pragma once

#include <string>
#include <vector>

#include "fracspde/fourier_field.hpp"
#include "fracspde/frac_calculus.hpp"

namespace fracspde::spectral {

// The three fundamental-solution kernels, identified by their per-mode
// symbols (lambda = |xi|^2):
//   p:        E_beta(-lambda t^beta)
//   q:        t^(beta-1) E_{beta,beta}(-lambda t^beta)
//   P (pbg):  t^(beta-gamma) E_{beta,1+beta-gamma}(-lambda t^beta)
// The P symbol uses the Riemann-Liouville form on both sides of beta = gamma;
// for beta < gamma it differs from the Caputo form by the correction
// -t^(beta-gamma)/Gamma(1+beta-gamma) (tested, not applied here).
enum class KernelKind { P, Q, PBG };

std::string to_string(KernelKind k);

double kernel_symbol(KernelKind kind, const frac::FracOrders& orders, double t,
                     double lambda);

// Field whose mode-xi coefficient is kernel_symbol(kind, orders, t, |xi|^2).
FourierField kernel_field(KernelKind kind, const frac::FracOrders& orders,
                          double t, const SpatialGrid& grid);

// Precomputed symbol values on a time grid, shared read-only by solver
// workers. Symbols depend on |xi|^2 only, so the table is indexed by the
// integer level |m|^2 (radial degeneracy: O(n) distinct levels, not O(n^d)).
//
//   p[j][lvl]      = p-symbol at t_j, j = 0..N
//   pbg[m][lvl]    = P-symbol at tau = m h, m = 1..N
//   q_smooth[m][lvl] = E_{beta,beta}(-lambda ((m-1/2) h)^beta), the smooth
//                      factor of q at interval midpoints; the singular factor
//                      tau^(beta-1) is integrated exactly by the solver.
class KernelTable {
 public:
  KernelTable(const frac::FracOrders& orders, const frac::TimeGrid& tgrid,
              const SpatialGrid& sgrid);

  const frac::FracOrders& orders() const { return orders_; }
  const frac::TimeGrid& time_grid() const { return tgrid_; }
  const SpatialGrid& spatial_grid() const { return sgrid_; }

  bool has_level(std::int64_t level) const { return level >= 0 && level <= max_level_ && present_[level]; }
  double p(int j, std::int64_t level) const { return p_[static_cast<std::size_t>(j) * stride_ + level]; }
  double pbg(int m, std::int64_t level) const { return pbg_[static_cast<std::size_t>(m - 1) * stride_ + level]; }
  double q_smooth(int m, std::int64_t level) const { return qs_[static_cast<std::size_t>(m - 1) * stride_ + level]; }

 private:
  frac::FracOrders orders_;
  frac::TimeGrid tgrid_;
  SpatialGrid sgrid_;
  std::int64_t max_level_ = 0;
  std::size_t stride_ = 0;
  std::vector<char> present_;
  std::vector<double> p_, pbg_, qs_;
};

} // namespace fracspde::spectral
