#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cvinfer/distributions.hpp"
#include "cvinfer/error.hpp"

using namespace cvinfer;

TEST_CASE("normal cdf reference values") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-15));
  CHECK(normal_cdf(-1.0) == doctest::Approx(0.15865525393145707).epsilon(1e-14));
  CHECK(normal_cdf(-10.0) == doctest::Approx(7.619853024160527e-24).epsilon(1e-12));
  CHECK(normal_cdf(-40.0) >= 0.0);
}

TEST_CASE("normal quantile inverts the cdf") {
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-15));
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
  for (double p : {1e-12, 1e-6, 0.01, 0.3, 0.7, 0.99, 1 - 1e-9}) {
    CAPTURE(p);
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
  }
  CHECK_THROWS_AS(normal_quantile(0.0), Error);
  CHECK_THROWS_AS(normal_quantile(1.0), Error);
}

TEST_CASE("log gamma against factorial sums") {
  double log_fact = 0.0;
  for (int n = 1; n <= 60; ++n) {
    CAPTURE(n);
    CHECK(log_gamma(n) == doctest::Approx(log_fact).epsilon(1e-13).scale(1.0));
    log_fact += std::log(static_cast<double>(n));
  }
  CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-15));
  CHECK(log_gamma(1e-8) == doctest::Approx(-std::log(1e-8) - 0.5772156649015329e-8).epsilon(1e-12));
  CHECK_THROWS_AS(log_gamma(0.0), Error);
}

TEST_CASE("weibull cv") {
  CHECK(weibull_cv(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  // shape 2 (Rayleigh): sqrt(4/pi - 1)
  CHECK(weibull_cv(2.0) == doctest::Approx(std::sqrt(4.0 / std::numbers::pi - 1.0)).epsilon(1e-13));
  double prev = weibull_cv(0.1);
  for (double k = 0.2; k < 400; k *= 1.3) {
    const double cv = weibull_cv(k);
    CHECK(cv < prev);
    prev = cv;
  }
}

TEST_CASE("weibull shape for cv round trip") {
  for (double tau : {0.01, 0.05, 0.1, 0.2, 0.3, 0.35, 0.5, 1.0, 2.0, 5.0}) {
    CAPTURE(tau);
    const double k = weibull_shape_for_cv(tau);
    CHECK(std::abs(weibull_cv(k) - tau) < 1e-10);
  }
  CHECK(weibull_shape_for_cv(1.0) == doctest::Approx(1.0).epsilon(1e-9));
  try {
    weibull_shape_for_cv(1e-4);
    FAIL("expected OutOfBracket");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OutOfBracket);
  }
  CHECK_THROWS_AS(weibull_shape_for_cv(-0.1), Error);
}
