#include "fracspde/mittag_leffler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracspde/gamma.hpp"
#include "fracspde/quadrature.hpp"

namespace fracspde::ml {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kSeriesWindow = 5.0;  // |z| below which the series is tried first
constexpr double kContourWindow = 50.0; // -50 <= z: contour; below: asymptotics

void validate(const MLParams& p) {
  if (!(p.beta > 0.0) || p.beta > 1.0)
    throw std::domain_error("ml: beta must lie in (0,1]");
  if (!(p.gamma_ml > 0.0))
    throw std::domain_error("ml: gamma_ml must be positive");
  if (!(p.accuracy_target > 0.0))
    throw std::domain_error("ml: accuracy_target must be positive");
}

struct SeriesOut {
  double value = 0.0;
  double max_term = 0.0;
  bool converged = false;
};

// Plain power series sum_k z^k / Gamma(beta k + gamma), Kahan-compensated.
// Terms switch to log form once the naive power would overflow.
SeriesOut series(double beta, double gamma, double z, double floor_scale) {
  SeriesOut out;
  double sum = 0.0, comp = 0.0;
  double zk = 1.0;
  const double alz = std::abs(z) > 0 ? std::log(std::abs(z)) : -1e300;
  bool use_logs = false;
  int small_streak = 0;
  const int kmax = 40000;
  for (int k = 0; k < kmax; ++k) {
    const double arg = beta * k + gamma;
    double term;
    if (!use_logs) {
      term = zk * rgamma(arg);
      const double next = std::abs(zk) * std::abs(z);
      if (next > 1e290) use_logs = true;
    } else {
      const double lt = k * alz - log_gamma(arg);
      if (lt > 700.0) {
        // The sum itself overflows a double.
        return SeriesOut{z > 0 ? std::numeric_limits<double>::infinity() : out.value,
                         std::numeric_limits<double>::infinity(), false};
      }
      double mag = std::exp(lt);
      term = (z < 0 && (k & 1)) ? -mag : mag;
    }
    out.max_term = std::max(out.max_term, std::abs(term));
    // Kahan step.
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (!use_logs) zk *= z;

    const double tail_bound = std::abs(term);
    if (k > 3 && tail_bound < 1e-18 * std::max({1.0, std::abs(sum), floor_scale})) {
      if (++small_streak >= 4) {
        out.value = sum;
        out.converged = true;
        return out;
      }
    } else {
      small_streak = 0;
    }
  }
  out.value = sum;
  out.converged = false;
  return out;
}

// Kummer branch for beta == 1: E_{1,b}(z) = e^z M(b-1, b, -z) / Gamma(b).
// For z < 0 the transformed series has x = -z > 0 and terms of a single
// sign past k = 0, so there is no cancellation.
double ml_beta_one(double b, double z) {
  if (z >= 0.0) {
    SeriesOut s = series(1.0, b, z, 1.0);
    if (!s.converged) throw std::runtime_error("ml: series regime failed to converge (beta=1, z>=0)");
    return s.value;
  }
  const double x = -z;
  if (x <= 650.0) {
    // M(a, c, x) with a = b-1, c = b.
    const double a = b - 1.0;
    double term = 1.0, sum = 1.0, comp = 0.0;
    for (int k = 0; k < 100000; ++k) {
      term *= (a + k) / (b + k) * x / (k + 1);
      const double y = term - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
      if (std::abs(term) < 1e-18 * std::abs(sum) && k > x) break;
    }
    return std::exp(z) * sum * rgamma(b);
  }
  // Deep negative tail: algebraic expansion; the exponentially small part is
  // below double resolution except in the pure-exponential case b == 1.
  if (b == 1.0) return std::exp(z);
  double sum = 0.0;
  double zki = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 30; ++k) {
    zki /= z;
    const double term = -zki * rgamma(b - k);
    if (term == 0.0) continue;
    if (std::abs(term) > prev) break;
    sum += term;
    prev = std::abs(term);
  }
  return sum;
}

struct AsymOut {
  double value = 0.0;
  double err = 0.0;
  bool usable = false;
};

// Algebraic asymptotic series for large negative z.
AsymOut asymptotic(double beta, double gamma, double z) {
  AsymOut out;
  double sum = 0.0;
  double zki = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  double last = 0.0;
  int used = 0;
  for (int k = 1; k <= 40; ++k) {
    zki /= z;
    const double term = -zki * rgamma(gamma - beta * k);
    if (term == 0.0) { ++used; continue; } // exact zero at a Gamma pole
    if (std::abs(term) > prev) break;      // divergent tail reached
    sum += term;
    last = term;
    prev = std::abs(term);
    ++used;
  }
  out.value = sum;
  out.err = std::abs(last) + std::abs(zki / z) * std::abs(rgamma(gamma - beta * (used + 1)));
  out.usable = used >= 1;
  return out;
}

// Spectral-integral (branch-cut) representation for 0 < alpha < 1, z < 0:
//   E_{alpha,b}(z) = integral_0^inf K(r) dr,
//   K(r) = (1/(pi*alpha)) r^{(1-b)/alpha} e^{-r^{1/alpha}}
//          * [r sin(pi(1-b)) - z sin(pi(1-b+alpha))]
//          / (r^2 - 2 r z cos(pi*alpha) + z^2),
// valid for b < 1 + alpha. Larger b is reduced first through the recurrence
// E_{a,b}(z) = (E_{a,b-a}(z) - 1/Gamma(b-a)) / z, which divides absolute
// error by |z| per step and is only taken for |z| >= 1.
double contour_core(double alpha, double b, double z, double abs_tol) {
  const double s1 = std::sin(kPi * (1.0 - b));
  const double s2 = std::sin(kPi * (1.0 - b + alpha));
  const double c = std::cos(kPi * alpha);
  const double az = -z; // > 0

  // After r = v^alpha and v = w^{1/qe} (qe = 1 + alpha - b) the integrand is
  // bounded at the origin; e^{-v} controls the tail.
  const double qe = 1.0 + alpha - b;
  auto integrand_v = [&](double v) {
    const double ra = std::pow(v, alpha); // = r
    const double num = ra * s1 - z * s2;
    const double den = ra * ra - 2.0 * ra * z * c + z * z;
    return (1.0 / kPi) * std::exp(-v) * num / den;
  };
  auto integrand_w = [&](double w) {
    const double v = std::pow(w, 1.0 / qe);
    return integrand_v(v) / qe;
  };

  double v_max = std::max(35.0, -std::log(std::max(abs_tol, 1e-300) * std::max(az, 1.0)) + 12.0);

  // Near-pole of the Lorentzian factor: r* = |z| |cos(pi alpha)| for
  // alpha > 1/2; resolve it with dedicated panels when it matters.
  std::vector<double> vpts{0.0};
  double v_star = -1.0, v_halfwidth = 0.0;
  if (c < 0.0) {
    const double r_star = az * (-c);
    v_star = std::pow(r_star, 1.0 / alpha);
    const double width_r = az * std::sin(kPi * alpha);
    v_halfwidth = width_r * std::pow(r_star, (1.0 - alpha) / alpha) / alpha;
    if (std::exp(-v_star) > 1e-3 * abs_tol * std::max(1.0, az * std::sin(kPi * alpha))) {
      v_max = std::max(v_max, v_star + 30.0 * v_halfwidth + 5.0);
      for (double m : {-30.0, -10.0, -3.0, -1.0, 1.0, 3.0, 10.0, 30.0}) {
        const double v = v_star + m * v_halfwidth;
        if (v > 0.0 && v < v_max) vpts.push_back(v);
      }
      if (v_star < v_max) vpts.push_back(v_star);
    }
  }
  for (double v : {0.25, 1.0, 3.0, 8.0, 16.0}) {
    if (v < v_max) vpts.push_back(v);
  }
  vpts.push_back(v_max);

  std::vector<double> wpts;
  wpts.reserve(vpts.size());
  for (double v : vpts) wpts.push_back(std::pow(v, qe));

  auto res = quad::integrate_panels(integrand_w, wpts, 0.1 * abs_tol, 8000);
  if (res.error_estimate > abs_tol) {
    throw std::runtime_error(
        "ml: contour regime could not reach the accuracy target (estimate " +
        std::to_string(res.error_estimate) + ")");
  }
  return res.value;
}

double contour(double alpha, double b, double z, double abs_tol) {
  // Reduce the second parameter into the representation's validity window.
  int m = 0;
  double b_red = b;
  const double b_limit = 1.0 + 0.95 * alpha;
  while (b_red > b_limit) {
    b_red -= alpha;
    ++m;
  }
  double val = contour_core(alpha, b_red, z, abs_tol);
  for (int i = 0; i < m; ++i) {
    val = (val - rgamma(b_red)) / z;
    b_red += alpha;
  }
  return val;
}

} // namespace

double ml(const MLParams& p, double z) {
  validate(p);
  if (std::isnan(z)) return z;
  if (z < kZMin)
    throw std::domain_error("ml: argument below documented domain z >= -1e9");

  const double beta = p.beta, gamma = p.gamma_ml;
  const double target = p.accuracy_target;

  if (beta == 1.0) return ml_beta_one(gamma, z);

  if (z >= 0.0) {
    SeriesOut s = series(beta, gamma, z, 1.0);
    if (!s.converged) {
      if (std::isinf(s.max_term))
        throw std::runtime_error("ml: series regime overflow for large positive z");
      throw std::runtime_error("ml: series regime failed to converge (z >= 0)");
    }
    return s.value;
  }

  if (z >= -kSeriesWindow) {
    SeriesOut s = series(beta, gamma, z, 1.0);
    // Cancellation estimate: the largest term fixes how many digits survive.
    if (s.converged && s.max_term * 1e-13 <= 0.25 * target) return s.value;
    return contour(beta, gamma, z, std::min(target, 1e-9));
  }

  if (z >= -kContourWindow) {
    return contour(beta, gamma, z, std::min(target, 1e-9));
  }

  AsymOut a = asymptotic(beta, gamma, z);
  const double scale = std::max(std::abs(a.value), 1e-300);
  if (a.usable && a.err / scale <= 5e-5) return a.value;
  // Rare fallback (e.g. |z| barely past the window with an unlucky gamma).
  return contour(beta, gamma, z, std::min(target, 1e-9));
}

double ml_asymptotic_check(const MLParams& p, double t) {
  validate(p);
  const double d = p.gamma_ml - p.beta;
  if (d <= -1.0 || d >= 1.0)
    throw std::domain_error("ml_asymptotic_check: requires -1 < gamma_ml - beta < 1");
  if (d == 0.0)
    throw std::domain_error("ml_asymptotic_check: gamma_ml == beta hits a Gamma pole");
  if (!(t >= 1e3))
    throw std::domain_error("ml_asymptotic_check: t must be >= 1e3");
  return t * ml(p, -t) * gamma_fn(d);
}

} // namespace fracspde::ml
