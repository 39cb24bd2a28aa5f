#pragma once

namespace fracspde::ml {

// Parameters of the two-parameter Mittag-Leffler function E_{beta,gamma_ml}.
// gamma_ml is the second ML parameter; it is unrelated to the noise order
// used elsewhere in the library.
struct MLParams {
  double beta = 0.5;            // in (0, 1]
  double gamma_ml = 1.0;        // > 0
  double accuracy_target = 1e-8; // absolute, on the validated domain
};

// Smallest admissible argument. Values below raise std::domain_error.
inline constexpr double kZMin = -1e9;

// E_{beta,gamma_ml}(z) for real z >= kZMin.
//
// Evaluation regimes (selection is internal, switchovers are continuous):
//   * power series with compensated summation near the origin and for z >= 0;
//     a running cancellation estimate rejects the series when the largest
//     term would eat the accuracy target, and evaluation falls through to
//   * the real spectral integral over the branch-cut density (the classical
//     Hankel-contour reduction for 0 < beta < 1), integrated by adaptive
//     Gauss-Kronrod after substitutions that remove the endpoint power and
//     with seeded panels around the near-pole that forms as beta -> 1;
//   * the algebraic asymptotic series -sum_k z^{-k}/Gamma(gamma_ml - beta k)
//     for large negative z (relative accuracy ~1e-4 or better);
//   * for beta == 1 exactly, the Kummer-transformed confluent series
//     E_{1,b}(z) = e^z M(b-1, b, -z)/Gamma(b), whose terms are single-signed.
double ml(const MLParams& params, double z);

// Diagnostic for the algebraic decay law on the negative axis: returns
// t * E_{beta,gamma_ml}(-t) * Gamma(gamma_ml - beta), which tends to 1 as
// t -> infinity whenever -1 < gamma_ml - beta < 1, gamma_ml != beta.
double ml_asymptotic_check(const MLParams& params, double t);

} // namespace fracspde::ml
