#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fracspde/fourier_field.hpp"
#include "fracspde/frac_calculus.hpp"
#include "fracspde/noise.hpp"
#include "fracspde/spectral_kernels.hpp"

namespace fracspde::solver {

enum class EquationForm { Divergence, NonDivergence };

// Pointwise nonlinearity catalog. Applied on grid values:
//   Linear:       amplitude * u
//   Sin:          amplitude * sin(u)            (globally Lipschitz, bounded)
//   TruncatedSup: amplitude * profile(x) * min(sup_x |u|, cap)
struct Nonlinearity {
  enum class Kind { None, Linear, Sin, TruncatedSup };
  Kind kind = Kind::None;
  double amplitude = 0.0;
  double cap = 1.0;
  std::optional<spectral::FourierField> profile; // TruncatedSup only; default 1

  bool active() const { return kind != Kind::None && amplitude != 0.0; }
};

// Coefficients of the quasi-linear equations. Spatial dependence enters
// through a single smooth diagonal perturbation amp*cos(xi_m . x) of a^{ij};
// the stochastic families sigma^{ijk}, mu^{ik}, nu^k are constants per
// stream. This built-in family satisfies the smoothness the estimates assume
// by construction.
struct CoefficientSet {
  int dim = 1;
  std::array<std::array<double, 3>, 3> a{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  double a_pert_amp = 0.0;
  std::array<int, 3> a_pert_mode{1, 0, 0};
  std::array<double, 3> b{0, 0, 0};
  double c = 0.0;
  std::vector<std::array<std::array<double, 3>, 3>> sigma; // per stream k
  std::vector<std::array<double, 3>> mu;                   // per stream k
  std::vector<double> nu;                                  // per stream k
  double ellipticity_delta = 0.5; // declared lower bound
  double bound_K1 = 10.0;         // declared upper bound
  int stream_count() const;
};

struct Violation {
  std::string constraint;
  std::string detail;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
  double gamma0 = 0.0;
  double sigma0 = 0.0;
  bool white_noise_feasible = false;
  double white_noise_gamma_bound = 0.0; // 1/2 + 3 beta / 4
  std::string summary() const;
};

// Diagnostic acceptance of the order pair (and optionally coefficients /
// white-noise configuration). Never throws on rejection; the report lists
// every violated constraint.
ValidationReport validate_orders(const frac::FracOrders& orders,
                                 const CoefficientSet* coeffs = nullptr,
                                 bool white_noise = false);

// The linear model problem: d_t^beta u = Lap u + f + d_t^gamma int g^k dW^k.
struct ModelProblem {
  frac::FracOrders orders;
  frac::TimeGrid tgrid;
  spectral::SpatialGrid sgrid;
  spectral::FourierField u0;
  spectral::FourierField f_const;                       // time-constant part
  std::function<spectral::FourierField(double)> f_time; // optional override
  std::vector<spectral::FourierField> g;                // per-stream coefficient
  noise::NoiseSpec noise_spec;                          // seed and K for g
};

// Discrete solution with the data needed to replay the distributional
// identity: u, the drift part du = Lap u + f, and the diffusion part su = g.
// Flat layout: value(j, i) = u[j * mode_count + i].
struct SolutionPath {
  frac::FracOrders orders;
  frac::TimeGrid tgrid;
  spectral::SpatialGrid sgrid;
  std::uint64_t seed = 0;
  std::uint64_t sample_index = 0;
  bool has_parts = false;
  std::vector<std::complex<double>> u;
  std::vector<std::complex<double>> du;
  std::vector<std::vector<std::complex<double>>> su; // per stream

  std::int64_t mode_count() const { return sgrid.total_points(); }
  std::complex<double> value(int j, std::int64_t mode) const
  { return u[static_cast<std::size_t>(j) * mode_count() + mode]; }
  spectral::FourierField field_at(int j) const;
};

// Mode-by-mode mild-solution scheme:
//   u^(t_n) = p^(t_n) u0^
//           + sum over intervals of exact tau^(beta-1) moments x smooth
//             midpoint factor against piecewise-linear f^        (q part)
//           + sum_k sum_{j<n} P^((n-j)h) g^k(t_j) dW^k_j         (left endpoint)
// du = Lap u + f and su = g are populated when want_parts is set.
SolutionPath solve_model(const ModelProblem& problem, bool want_parts = true);

// Same, reusing a prebuilt kernel table and a fixed noise realization
// (shared read-only across Monte Carlo workers).
SolutionPath solve_model(const ModelProblem& problem,
                         const spectral::KernelTable& table,
                         const noise::NoiseRealization& noise,
                         bool want_parts = true);

// Terminal-time value of a single mode under the same discretization,
// computed in O(N) without storing the path. Used by large-N Monte Carlo
// second-moment checks; agrees with solve_model's last node.
std::complex<double> terminal_mode_value(const ModelProblem& problem,
                                         const spectral::KernelTable& table,
                                         const noise::NoiseRealization& noise,
                                         const std::array<int, 3>& mode);

struct QuasilinearProblem {
  frac::FracOrders orders;
  frac::TimeGrid tgrid;
  spectral::SpatialGrid sgrid;
  spectral::FourierField u0;
  spectral::FourierField f_det;                // deterministic drift forcing
  std::vector<spectral::FourierField> g_det;   // deterministic noise coefficients
  CoefficientSet coeffs;
  Nonlinearity f_nonlin;                       // f(u) (h(u) in divergence form)
  Nonlinearity g_nonlin;                       // g^0(u), applied to stream 0
  EquationForm form = EquationForm::NonDivergence;
  noise::NoiseSpec noise_spec;
  double tol = 1e-8;   // relative Bochner distance between iterates
  int max_iters = 50;
};

struct QuasilinearResult {
  SolutionPath path;
  std::vector<double> distances; // successive-iterate Bochner distances
  int iterations = 0;
  bool converged = false;
};

// Picard iteration with the Laplacian as frozen principal part: iterate
// u_{m+1} = solve_model with sources assembled from u_m (drift
// (a - I) D^2 u + b Du + c u + f(u), divergence form assembled as
// D_i[a^{ij} u_{x_j} + b^i u + f^i(u)] + c u + h(u) - Lap u; diffusion
// sigma D^2 u + mu Du + nu u + g(u)), with the same noise realization across
// iterates. Spatial products act on the grid, derivatives in mode space.
// Throws on coefficient-validation failure; returns the distance history,
// and a non-convergence error carries it in the message.
QuasilinearResult solve_quasilinear(const QuasilinearProblem& problem);

// Max over test modes and nodes t_j >= window_lo * T of the mismatch in the
// distributional identity
//   I^(1-beta)(u - u(0)) = int_0^t du ds + I^(1-gamma) S(t),
//   S(t_j) = sum_k sum_{l<j} su^k(t_l) dW^k_l,
// normalized by the solution's Bochner norm. The initial window is excluded:
// inside the kernel boundary layer (t = O(h)) the discrete mismatch is
// first order in h for any data, the same effect that makes node-0
// derivatives unreliable.
double residual_distributional(const SolutionPath& path,
                               const std::vector<std::array<int, 3>>& test_modes,
                               double window_lo = 0.05);

} // namespace fracspde::solver
