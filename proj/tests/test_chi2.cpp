#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "elmiss/chi2.hpp"

using namespace elmiss;

TEST_SUITE("chi2") {
  TEST_CASE("incomplete gamma agrees with Boost") {
    for (double a : {0.5, 1.0, 2.5, 10.0, 50.0}) {
      for (double x : {1e-3, 0.1, 1.0, 3.0, 10.0, 40.0, 100.0}) {
        CHECK(gamma_p(a, x) == doctest::Approx(boost::math::gamma_p(a, x)).epsilon(1e-12));
        CHECK(gamma_q(a, x) + gamma_p(a, x) == doctest::Approx(1.0).epsilon(1e-14));
        const double q = boost::math::gamma_q(a, x);
        CHECK(std::abs(gamma_q(a, x) - q) <= 1e-12 * q + 1e-300);
      }
    }
  }

  TEST_CASE("quantiles agree with Boost to 1e-9") {
    for (double dof : {1.0, 2.0, 3.0, 5.0, 10.0, 30.0}) {
      boost::math::chi_squared_distribution<double> dist(dof);
      for (double p : {1e-6, 0.01, 0.05, 0.5, 0.9, 0.95, 0.99, 0.999999}) {
        CHECK(std::abs(chi2_quantile(p, dof) - boost::math::quantile(dist, p)) <= 1e-9);
      }
    }
  }

  TEST_CASE("familiar values") {
    CHECK(chi2_quantile(0.95, 1.0) == doctest::Approx(3.841458820694124).epsilon(1e-12));
    CHECK(chi2_quantile(0.95, 2.0) == doctest::Approx(5.991464547107979).epsilon(1e-12));
    CHECK(chi2_cdf(0.0, 2.0) == 0.0);
    CHECK(chi2_sf(0.0, 2.0) == 1.0);
    CHECK(chi2_sf(std::numeric_limits<double>::infinity(), 2.0) == 0.0);
    // dof = 2 is exponential with mean 2.
    CHECK(chi2_sf(3.0, 2.0) == doctest::Approx(std::exp(-1.5)).epsilon(1e-14));
    CHECK(chi2_pdf(3.0, 2.0) == doctest::Approx(0.5 * std::exp(-1.5)).epsilon(1e-14));
  }

  TEST_CASE("quantile inverts the distribution function") {
    for (double dof : {1.0, 2.0, 7.0}) {
      for (double p = 0.02; p < 1.0; p += 0.07) {
        CHECK(chi2_cdf(chi2_quantile(p, dof), dof) == doctest::Approx(p).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("normal quantile") {
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(normal_quantile(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-9));
  }

  TEST_CASE("invalid arguments") {
    CHECK(chi2_quantile(0.0, 2.0) == 0.0);
    CHECK(std::isinf(chi2_quantile(1.0, 2.0)));
    CHECK_THROWS(chi2_quantile(-0.1, 2.0));
    CHECK_THROWS(chi2_quantile(1.1, 2.0));
    CHECK_THROWS(chi2_quantile(0.5, 0.0));
  }
}
