#include <catch2/catch_amalgamated.hpp>

#include "mfpt/bessel.hpp"
#include "oracles.hpp"

using namespace mfpt;

TEST_CASE("bessel values at zero") {
    CHECK(bessel_i(0, 0.0) == 1.0);
    CHECK(bessel_i(1, 0.0) == 0.0);
    CHECK(bessel_i(2, 0.0) == 0.0);
}

TEST_CASE("bessel I1(1) against the truncated power series oracle") {
    const double oracle = static_cast<double>(oracles::bessel_series(1, 1.0L));
    CHECK_THAT(bessel_i(1, 1.0), Catch::Matchers::WithinRel(oracle, 1e-14));
}

TEST_CASE("bessel matches the series oracle across the working range") {
    for (double x : {0.01, 0.5, 1.0, 3.0, 10.0, 25.0, 29.9, 30.1, 35.0, 60.0, 150.0}) {
        for (int order : {0, 1, 2}) {
            const double oracle = static_cast<double>(oracles::bessel_series(order, x));
            CHECK_THAT(bessel_i(order, x), Catch::Matchers::WithinRel(oracle, 1e-12));
        }
    }
}

TEST_CASE("bessel matches the integral-representation oracle") {
    for (double x : {0.7, 5.0, 20.0, 40.0}) {
        for (int order : {0, 1, 2}) {
            CHECK_THAT(bessel_i(order, x),
                       Catch::Matchers::WithinRel(oracles::bessel_integral(order, x), 1e-10));
        }
    }
}

TEST_CASE("series/asymptotic switchover agrees across the overlap window") {
    for (double x = 25.0; x <= 35.0; x += 0.5) {
        for (int order : {0, 1, 2}) {
            const double series = std::exp(-x) * detail::bessel_i_series(order, x);
            const double asym = detail::bessel_i_scaled_asymptotic(order, x);
            CHECK_THAT(asym, Catch::Matchers::WithinRel(series, 1e-12));
        }
    }
}

TEST_CASE("bessel input validation") {
    CHECK_THROWS_AS(bessel_i(3, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(bessel_i(-1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(bessel_i(0, -0.5), std::domain_error);
    CHECK_THROWS_AS(alpha_of_k(-1.0), std::domain_error);
}

TEST_CASE("anisotropy indicator") {
    CHECK(alpha_of_k(0.0) == 0.0);
    // printed to three decimals in the source material
    CHECK_THAT(alpha_of_k(25.0), Catch::Matchers::WithinAbs(0.922, 5e-4));
    CHECK(alpha_of_k(200.0) > 0.99);
    CHECK(alpha_of_k(1e5) < 1.0);
}

TEST_CASE("alpha_of_k is strictly increasing and bounded by 1") {
    double prev = -1.0;
    for (double k = 0.0; k <= 400.0; k += 2.5) {
        const double a = alpha_of_k(k);
        CHECK(a > prev);
        CHECK(a < 1.0);
        prev = a;
    }
}

TEST_CASE("k_of_alpha inverts alpha_of_k") {
    for (double a : {0.1, 0.5, 0.75, 0.922, 0.99}) {
        const double k = k_of_alpha(a);
        CHECK_THAT(alpha_of_k(k), Catch::Matchers::WithinAbs(a, 1e-12));
    }
    CHECK(k_of_alpha(0.0) == 0.0);
}
