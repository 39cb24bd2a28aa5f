#include "fracspde/spectral_kernels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fracspde/mittag_leffler.hpp"

namespace fracspde::spectral {

std::string to_string(KernelKind k) {
  switch (k) {
    case KernelKind::P: return "p";
    case KernelKind::Q: return "q";
    case KernelKind::PBG: return "P";
  }
  return "?";
}

double kernel_symbol(KernelKind kind, const frac::FracOrders& orders, double t,
                     double lambda) {
  if (!orders.valid())
    throw std::domain_error("kernel_symbol: invalid fractional orders");
  if (!(t > 0.0)) throw std::domain_error("kernel_symbol: t must be positive");
  if (lambda < 0.0) throw std::domain_error("kernel_symbol: lambda must be >= 0");
  const double beta = orders.beta, gamma = orders.gamma;
  const double z = -lambda * std::pow(t, beta);
  switch (kind) {
    case KernelKind::P:
      return ml::ml({beta, 1.0, 1e-10}, z);
    case KernelKind::Q:
      return std::pow(t, beta - 1.0) * ml::ml({beta, beta, 1e-10}, z);
    case KernelKind::PBG:
      return std::pow(t, beta - gamma) * ml::ml({beta, 1.0 + beta - gamma, 1e-10}, z);
  }
  throw std::invalid_argument("kernel_symbol: unknown kind");
}

FourierField kernel_field(KernelKind kind, const frac::FracOrders& orders,
                          double t, const SpatialGrid& grid) {
  // Evaluate once per radial level, then scatter.
  std::vector<double> by_level(static_cast<std::size_t>(grid.max_level()) + 1,
                               std::numeric_limits<double>::quiet_NaN());
  FourierField f(grid);
  for (std::int64_t i = 0; i < grid.total_points(); ++i) {
    const std::int64_t lvl = grid.mode_level(i);
    double& v = by_level[static_cast<std::size_t>(lvl)];
    if (std::isnan(v)) v = kernel_symbol(kind, orders, t, grid.lambda_of_level(lvl));
    f.modes[i] = v;
  }
  return f;
}

KernelTable::KernelTable(const frac::FracOrders& orders,
                         const frac::TimeGrid& tgrid, const SpatialGrid& sgrid)
    : orders_(orders), tgrid_(tgrid), sgrid_(sgrid) {
  if (!orders.valid()) throw std::domain_error("KernelTable: invalid fractional orders");
  max_level_ = sgrid.max_level();
  stride_ = static_cast<std::size_t>(max_level_) + 1;
  present_.assign(stride_, 0);
  for (std::int64_t i = 0; i < sgrid.total_points(); ++i) present_[sgrid.mode_level(i)] = 1;

  const int N = tgrid.steps;
  const double h = tgrid.dt();
  const double beta = orders.beta, gamma = orders.gamma;
  p_.assign(stride_ * static_cast<std::size_t>(N + 1), 0.0);
  pbg_.assign(stride_ * static_cast<std::size_t>(N), 0.0);
  qs_.assign(stride_ * static_cast<std::size_t>(N), 0.0);

  const ml::MLParams mp{beta, 1.0, 1e-10};
  const ml::MLParams mq{beta, beta, 1e-10};
  const ml::MLParams mpbg{beta, 1.0 + beta - gamma, 1e-10};

  for (std::int64_t lvl = 0; lvl <= max_level_; ++lvl) {
    if (!present_[lvl]) continue;
    const double lambda = sgrid.lambda_of_level(lvl);
    p_[lvl] = 1.0; // E(0) at t_0
    for (int j = 1; j <= N; ++j) {
      const double t = j * h;
      p_[static_cast<std::size_t>(j) * stride_ + lvl] = ml::ml(mp, -lambda * std::pow(t, beta));
    }
    for (int m = 1; m <= N; ++m) {
      const double tau = m * h;
      const double tmid = (m - 0.5) * h;
      pbg_[static_cast<std::size_t>(m - 1) * stride_ + lvl] =
          std::pow(tau, beta - gamma) * ml::ml(mpbg, -lambda * std::pow(tau, beta));
      qs_[static_cast<std::size_t>(m - 1) * stride_ + lvl] =
          ml::ml(mq, -lambda * std::pow(tmid, beta));
    }
  }
}

} // namespace fracspde::spectral
