#include <doctest.h>

#include <cmath>
#include <random>

#include "otima/error.hpp"
#include "otima/oracle.hpp"
#include "otima/specfun.hpp"

using namespace otima;
using specfun::complex;

TEST_SUITE("specfun")
{
    TEST_CASE("bessel_j anchors")
    {
        CHECK(specfun::bessel_j(0, 0.0) == 1.0);
        CHECK(specfun::bessel_j(1, 0.0) == 0.0);
        CHECK(specfun::bessel_j(2, 4.0) == doctest::Approx(0.3641281459).epsilon(1e-10));
        // 300-digit series values
        CHECK(specfun::bessel_j(0, 500.0) == doctest::Approx(-0.034100556880732).epsilon(1e-12));
        CHECK(specfun::bessel_j(200, 500.0) == doctest::Approx(0.0312021981537278).epsilon(1e-12));
    }

    TEST_CASE("negative orders")
    {
        for (int m = 0; m <= 12; ++m) {
            const double sign = m % 2 ? -1.0 : 1.0;
            CHECK(specfun::bessel_j(-m, 3.7) == doctest::Approx(sign * specfun::bessel_j(m, 3.7)).epsilon(1e-15));
            const complex z{1.5, -2.0};
            CHECK(std::abs(specfun::bessel_i(-m, z) - specfun::bessel_i(m, z)) <= 1e-15 * std::abs(specfun::bessel_i(m, z)));
        }
    }

    TEST_CASE("bessel_i anchors")
    {
        CHECK(specfun::bessel_i(0, {0.0, 0.0}) == complex{1.0, 0.0});
        const complex v = specfun::bessel_i(0, {4.0, 0.0});
        CHECK(v.real() == doctest::Approx(11.3019219521).epsilon(1e-11));
        CHECK(v.imag() == 0.0);
        CHECK(specfun::bessel_i(1, {4.0, 0.0}).real() == doctest::Approx(9.759465153704).epsilon(1e-11));
    }

    TEST_CASE("I_m(ix) = i^m J_m(x)")
    {
        for (int m = -6; m <= 6; ++m) {
            for (double x : {0.3, 2.0, 17.5, -9.0}) {
                complex im_power{1.0, 0.0};
                for (int k = 0; k < std::abs(m); ++k) {
                    im_power *= complex{0.0, m > 0 ? 1.0 : -1.0};
                }
                const complex expected = im_power * specfun::bessel_j(m, x);
                CHECK(std::abs(specfun::bessel_i(m, {0.0, x}) - expected) <= 1e-13);
            }
        }
    }

    TEST_CASE("recurrence J_{m-1} + J_{m+1} = (2m/x) J_m")
    {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> xs(0.5, 50.0);
        for (int trial = 0; trial < 200; ++trial) {
            const double x = xs(rng);
            for (int m = 1; m <= 20; ++m) {
                const double lhs = specfun::bessel_j(m - 1, x) + specfun::bessel_j(m + 1, x);
                const double rhs = 2.0 * m / x * specfun::bessel_j(m, x);
                const double scale = std::max({std::abs(lhs), std::abs(specfun::bessel_j(m - 1, x)), 1e-300});
                CHECK(std::abs(lhs - rhs) <= 1e-10 * scale);
            }
        }
    }

    TEST_CASE("complex and real axis agree")
    {
        for (int m = 0; m <= 30; m += 3) {
            for (double x : {0.1, 1.0, 7.0, 40.0, -12.0}) {
                const complex a = specfun::bessel_i(m, {x, 0.0});
                const complex b = specfun::bessel_i(m, {x, 1e-300});
                CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
                CHECK(a.imag() == 0.0);
            }
        }
    }

    TEST_CASE("agreement with the extended-precision series")
    {
        std::mt19937_64 rng(5);
        std::uniform_int_distribution<int> orders(-200, 200);
        std::uniform_real_distribution<double> xs(-500.0, 500.0);
        for (int trial = 0; trial < 150; ++trial) {
            const int m = orders(rng);
            const double x = xs(rng);
            const double ref = oracle::bessel_j_series(m, x);
            // relative, with an absolute floor at the scale of the Bessel
            // envelope for points sitting on a zero
            CHECK(std::abs(specfun::bessel_j(m, x) - ref) <= 1e-10 * std::abs(ref) + 1e-15);
        }
        std::uniform_real_distribution<double> parts(-60.0, 60.0);
        std::uniform_int_distribution<int> small(-40, 40);
        for (int trial = 0; trial < 100; ++trial) {
            const int m = small(rng);
            const complex z{parts(rng), parts(rng)};
            const complex ref = oracle::bessel_i_series(m, z);
            CHECK(std::abs(specfun::bessel_i(m, z) - ref)
                  <= 1e-10 * std::abs(ref) + 1e-15 * std::exp(std::abs(z.real())));
        }
    }

    TEST_CASE("domain errors")
    {
        CHECK_THROWS_AS(specfun::bessel_j(201, 1.0), DomainError);
        CHECK_THROWS_AS(specfun::bessel_j(0, 500.5), DomainError);
        CHECK_THROWS_AS(specfun::bessel_i(-201, {1.0, 0.0}), DomainError);
        CHECK_THROWS_AS(specfun::bessel_i(3, {400.0, 400.0}), DomainError);
        CHECK_NOTHROW(specfun::bessel_j(-200, -500.0));
    }

    TEST_CASE("scaled sequences")
    {
        const complex z{-2.0, 4.0};
        const auto seq = specfun::bessel_ive_sequence(z, 5);
        REQUIRE(seq.size() >= 6);
        for (int k = 0; k < static_cast<int>(seq.size()) && k < 20; ++k) {
            CHECK(std::abs(seq[k] - specfun::bessel_ive(k, z)) <= 1e-14);
        }
        const auto j = specfun::bessel_j_sequence(30.0);
        for (int k = 0; k < 40; ++k) {
            CHECK(j[k] == doctest::Approx(specfun::bessel_j(k, 30.0)).epsilon(1e-12));
        }
    }

    TEST_CASE("spherical Bessel")
    {
        CHECK(specfun::spherical_j0(0.0) == 1.0);
        CHECK(specfun::spherical_j1_over_x(0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-16));
        CHECK(std::abs(specfun::spherical_j0(M_PI)) < 1e-16);
        // continuity across the series threshold
        const double t = specfun::spherical_series_threshold;
        CHECK(specfun::spherical_j1_over_x(t * (1 - 1e-9))
              == doctest::Approx(specfun::spherical_j1_over_x(t * (1 + 1e-9))).epsilon(1e-12));
        for (double x : {0.01, 0.5, 3.0, 100.0, 314.0}) {
            const double direct = (std::sin(x) - x * std::cos(x)) / (x * x * x);
            CHECK(specfun::spherical_j1_over_x(x) == doctest::Approx(direct).epsilon(1e-12));
            CHECK(specfun::spherical_j0(-x) == doctest::Approx(std::sin(x) / x).epsilon(1e-15));
        }
    }
}
