#pragma once

#include <functional>
#include <vector>

namespace fracspde::quad {

struct Result {
  double value = 0.0;
  double error_estimate = 0.0; // accumulated Kronrod error estimate
  int evaluations = 0;
};

// Adaptive Gauss-Kronrod (7,15) over [a, b] to absolute tolerance abs_tol.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_intervals = 4000);

// Same, but the initial interval stack is seeded with the given breakpoints
// (sorted, deduplicated; must bracket the domain). Useful when the integrand
// has a known near-singular feature the bisection should not have to find.
Result integrate_panels(const std::function<double(double)>& f,
                        const std::vector<double>& breakpoints, double abs_tol,
                        int max_intervals = 4000);

// Integral of f over (0, upper] where f(s) ~ s^p near 0 with p > -1.
// The substitution s = u^(1/(1+p)) removes the endpoint power exactly.
// Throws std::domain_error if p <= -1.
Result integrate_power_endpoint(const std::function<double(double)>& f,
                                double upper, double p, double abs_tol,
                                int max_intervals = 4000);

} // namespace fracspde::quad
