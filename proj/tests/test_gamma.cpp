#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <initializer_list>

#include "fracspde/gamma.hpp"

using namespace fracspde;

TEST_CASE("gamma matches the standard library across (0, 50)") {
  // std::tgamma is the independent reference here.
  for (double x = 0.02; x < 50.0; x += 0.173) {
    CHECK(gamma_fn(x) == doctest::Approx(std::tgamma(x)).epsilon(1e-12));
  }
}

TEST_CASE("gamma special values") {
  CHECK(gamma_fn(0.5) == doctest::Approx(1.7724538509055160273).epsilon(1e-14)); // sqrt(pi)
  CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-14));
  CHECK(gamma_fn(0.3) == doctest::Approx(2.9915689876875906283).epsilon(1e-13));
  CHECK(gamma_fn(-0.3) == doctest::Approx(-4.3268511088251926189).epsilon(1e-12));
}

TEST_CASE("gamma throws at the poles") {
  CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
  CHECK_THROWS_AS(gamma_fn(-3.0), std::domain_error);
}

TEST_CASE("log_gamma agrees with std::lgamma") {
  for (double x : {0.05, 0.4, 1.0, 2.7, 11.0, 43.5, 120.0, 500.0}) {
    CHECK(log_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(log_gamma(-1.5), std::domain_error);
}

TEST_CASE("rgamma is zero at the poles and 1/Gamma elsewhere") {
  CHECK(rgamma(0.0) == 0.0);
  CHECK(rgamma(-1.0) == 0.0);
  CHECK(rgamma(-7.0) == 0.0);
  for (double x : {0.2, 1.0, 3.7, -0.5, -2.3, 20.0}) {
    CHECK(rgamma(x) == doctest::Approx(1.0 / std::tgamma(x)).epsilon(1e-12));
  }
  // 1/Gamma overflows for deeply negative non-integer arguments
  CHECK(std::isinf(rgamma(-250.7)));
}
