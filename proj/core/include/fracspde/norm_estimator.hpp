#pragma once

#include <vector>

#include "fracspde/fourier_field.hpp"
#include "fracspde/frac_calculus.hpp"
#include "fracspde/mild_solver.hpp"

namespace fracspde::norms {

// H^sigma norm: sqrt( L^d sum_m (1 + |xi_m|^2)^sigma |u^_m|^2 ).
// sigma = 0 reproduces the L2(torus) norm (Parseval against grid quadrature).
double sobolev_norm(const spectral::FourierField& field, double sigma);

// l2-family variant: the k-sum runs inside the root.
double sobolev_norm_family(const std::vector<spectral::FourierField>& family, double sigma);

// Discrete Bochner norm of a solution path: sqrt( int_0^T ||u(t)||_{H^sigma}^2 dt )
// by trapezoid on the squared norms; the t=0 term is the data norm.
double bochner_norm(const solver::SolutionPath& path, double sigma);

struct NormReport {
  double sigma = 0.0;
  double estimate = 0.0; // sqrt(mean of int ||u||^2 dt) over samples
  double stderr_ = 0.0;  // delta-method standard error of the estimate
  int samples = 0;
  int time_steps = 0;
  int points = 0;
  double mean_sq = 0.0;      // mean of the squared Bochner norm
  double stderr_sq = 0.0;    // its standard error
};

// Monte Carlo estimate of the Bochner norm over M independent solves with
// substreamed seeds (sample_index = 0..M-1). Parallel map over samples with
// a deterministic pairwise reduction; the result is independent of the
// worker count. Any sample failure aborts with the failing sample recorded.
NormReport mc_estimate(const solver::ModelProblem& problem, double sigma, int M,
                       int workers = 0);

// Threshold of the extra smoothness the stochastic convolution gains:
// 2 ^ ((1-2 gamma)/beta + 2) capped at 2.
double threshold_sigma(const frac::FracOrders& orders);

// int_0^R r^(-2a) E_{beta,1-a}(-r^beta)^2 dr, a = gamma - beta (< 1/2).
// Adaptive quadrature with singular-endpoint substitution at 0.
// Behavior as R grows separates three regimes: convergent for gamma > 1/2,
// logarithmic for gamma = 1/2, and R^(1-2 gamma) growth for gamma < 1/2.
double regularity_integral(const frac::FracOrders& orders, double cutoff,
                           double abs_tol = 1e-8);

struct ProbeRow {
  double sigma = 0.0;
  int n = 0;
  double estimate = 0.0; // mean squared Bochner norm
  double stderr_ = 0.0;
  double ratio = 0.0;    // estimate / estimate at the previous refinement
};

struct ProbeConfig {
  double horizon = 1.0;
  // Fine common grid: the top driven mode must stay resolved in time, or
  // the discrete isometry flattens the power law the probe measures.
  int time_steps = 32768;
  std::uint64_t seed = 20240801;
  int samples = 200;
  // Driven-mode ladder (|m| values, equal amplitude, one complex Wiener
  // stream per entry keyed by the ladder slot so refinements share draws).
  // A dense full-basis drive would shift the stabilize/grow transition by
  // d/2 in sigma; the sparse ladder keeps it at the threshold itself, and
  // dropping |m| = 1 keeps the low-sigma refinement ratios quiet.
  std::vector<int> ladder{2, 3, 4, 13, 32};
  double ladder_growth = 2.46; // continuation factor past the last entry
  int workers = 0;
};

// For each sigma and each spatial refinement n, Monte Carlo estimate of the
// squared Bochner H^sigma norm of the driven solution. Ratios of successive
// refinements stabilize below threshold_sigma and grow above it.
std::vector<ProbeRow> regularity_probe(const frac::FracOrders& orders,
                                       const std::vector<double>& sigma_list,
                                       const std::vector<int>& n_list,
                                       const ProbeConfig& config = {});

// a(t) * E_beta(b Gamma(beta) t^beta); the right side of the fractional
// Gronwall bound with a evaluated at t by the caller.
double gronwall_bound(double a_at_t, double b, double beta, double t);
frac::RealPath gronwall_bound_path(const frac::RealPath& a, double b, double beta);

// Fixed-point solution of eta = a + b Gamma(beta) I^beta eta to the given
// relative tolerance; the saturating comparison for the Gronwall bound.
// Detects blow-up past an overflow guard (cannot occur for finite b, T).
frac::RealPath volterra_iterate(const frac::RealPath& a, double b, double beta,
                                double rel_tol = 1e-10, int max_iters = 600);

struct RatioReport {
  double ratio = 0.0;
  bool zero_data = false;
  bool violation = false; // nonzero numerator over zero denominator
  double numerator = 0.0;
  double denom_u0 = 0.0, denom_f = 0.0, denom_g = 0.0;
};

// ||u||_{H^(sigma+2)} / (||u0||_{H^(sigma+1)} + ||f|| + ||g||), the measured
// shape of the solvability estimate for the model problem. Deterministic
// data norms are exact; the numerator is Monte Carlo (M samples).
RatioReport estimate_ratio(const solver::ModelProblem& problem, double sigma,
                           int M, int workers = 0);

} // namespace fracspde::norms
