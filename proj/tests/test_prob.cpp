#include <doctest.h>

#include "pwd/prob.hpp"

// Reference values frozen from an independent implementation of the same
// distributions (SciPy 1.15).

TEST_CASE("normal cdf matches reference values") {
    CHECK(pwd::normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(pwd::normal_cdf(-3.2) == doctest::Approx(0.0006871379379158471).epsilon(1e-12));
    CHECK(pwd::normal_cdf(-0.5) == doctest::Approx(0.3085375387259869).epsilon(1e-13));
    CHECK(pwd::normal_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-13));
    CHECK(pwd::normal_cdf(2.261) == doctest::Approx(0.9881203714688228).epsilon(1e-13));
    CHECK(pwd::normal_tail(6.0) == doctest::Approx(1.0 - 0.9999999990134123).epsilon(1e-9));
}

TEST_CASE("normal quantile matches reference values") {
    CHECK(pwd::normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(pwd::normal_quantile(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-12));
    CHECK(pwd::normal_quantile(0.001) == doctest::Approx(-3.090232306167813).epsilon(1e-13));
    CHECK(pwd::normal_quantile(0.025) == doctest::Approx(-1.9599639845400545).epsilon(1e-13));
    CHECK(pwd::normal_quantile(0.842) == doctest::Approx(1.0027116650265493).epsilon(1e-13));
    CHECK(pwd::normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-13));
    CHECK(pwd::normal_quantile(1.0 - 1e-12) == doctest::Approx(7.0344869100478356).epsilon(1e-10));
    CHECK_THROWS_AS(pwd::normal_quantile(0.0), pwd::DomainError);
    CHECK_THROWS_AS(pwd::normal_quantile(1.0), pwd::DomainError);
}

TEST_CASE("normal quantile inverts the cdf across the range") {
    for (double p = 0.0005; p < 1.0; p += 0.0007) {
        const double x = pwd::normal_quantile(p);
        CHECK(pwd::normal_cdf(x) == doctest::Approx(p).epsilon(1e-12));
    }
}

TEST_CASE("regularized incomplete gamma matches reference values") {
    CHECK(pwd::gamma_p(0.5, 0.25) == doctest::Approx(0.5204998778130466).epsilon(1e-13));
    CHECK(pwd::gamma_p(2.5, 1.0) == doctest::Approx(0.15085496391539038).epsilon(1e-13));
    CHECK(pwd::gamma_p(10.0, 12.5) == doctest::Approx(0.798568895054464).epsilon(1e-13));
    CHECK(pwd::gamma_p(50.0, 40.0) == doctest::Approx(0.07033506665939494).epsilon(1e-13));
    CHECK(pwd::gamma_q(10.0, 12.5) == doctest::Approx(1.0 - 0.798568895054464).epsilon(1e-12));
    CHECK(pwd::gamma_p(3.0, 0.0) == 0.0);
}

TEST_CASE("chi-squared quantile and tail match reference values") {
    CHECK(pwd::chi_squared_quantile(0.025, 98) ==
          doctest::Approx(72.50093949765828).epsilon(1e-12));
    CHECK(pwd::chi_squared_quantile(0.975, 98) ==
          doctest::Approx(127.28207236425453).epsilon(1e-12));
    CHECK(pwd::chi_squared_quantile(0.95, 1) == doctest::Approx(3.841458820694124).epsilon(1e-12));
    CHECK(pwd::chi_squared_quantile(0.5, 3) == doctest::Approx(2.3659738843753377).epsilon(1e-12));
    CHECK(pwd::chi_squared_quantile(0.99, 1) == doctest::Approx(6.6348966010212145).epsilon(1e-12));
    CHECK(pwd::chi_squared_tail(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(pwd::chi_squared_tail(10.0, 4) == doctest::Approx(0.04042768199451279).epsilon(1e-12));
    CHECK_THROWS_AS(pwd::chi_squared_quantile(0.0, 3), pwd::DomainError);
}
