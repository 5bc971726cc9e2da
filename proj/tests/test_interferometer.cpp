#include <doctest.h>

#include <cmath>
#include <vector>

#include "otima/constants.hpp"
#include "otima/error.hpp"
#include "otima/grating.hpp"
#include "otima/interferometer.hpp"
#include "otima/specfun.hpp"

using namespace otima;
using namespace otima::interferometer;

namespace {

const double amu = constants::atomic_mass_unit;

Setup reference_setup(double t_ratio = 1.0, double beta = 1.0)
{
    Setup s;
    s.sequence.d = 78.815e-9;
    s.ensemble.mass = 1e6 * amu;
    s.ensemble.velocity_spread = 1.0;
    s.ensemble.cloud_extension = 1e-3;
    s.sequence.T = t_ratio * talbot_time(s.ensemble.mass, s.sequence.d);
    const auto g = grating::GratingPulse::from_beta(8.0, beta);
    s.pulses = {g, g, g};
    return s;
}

// closed expression for the sinusoidal visibility with equal delays
double v_sin_formula(double n1, double n2, double phi2, double n3, double xi)
{
    const double zi = 0.5 * n2 * std::cos(constants::pi * xi);
    const double zc = phi2 * std::sin(constants::pi * xi);
    const double r = (zc - zi) / (zc + zi);
    const double arg2 = (zc * zc - zi * zi);
    // |(zc - zi) J_2(sqrt(zc^2 - zi^2))| / |zc + zi|, continued through I_2
    const double j2 = arg2 >= 0.0 ? std::abs(specfun::bessel_j(2, std::sqrt(arg2)))
                                  : std::abs(specfun::bessel_i(2, {std::sqrt(-arg2), 0.0}).real());
    const auto ratio = [](double n) {
        return specfun::bessel_i(1, {0.5 * n, 0.0}).real() / specfun::bessel_i(0, {0.5 * n, 0.0}).real();
    };
    return 2.0 * ratio(n1) * std::abs(r) * j2 / specfun::bessel_i(0, {0.5 * n2, 0.0}).real() * ratio(n3);
}

}  // namespace

TEST_SUITE("interferometer")
{
    TEST_CASE("Talbot time")
    {
        const double tt = talbot_time(1e6 * amu, 78.5e-9);
        CHECK(tt == doctest::Approx(15.44e-3).epsilon(1e-3));
        CHECK(talbot_time(2e6 * amu, 78.5e-9) == doctest::Approx(2.0 * tt).epsilon(1e-15));
    }

    TEST_CASE("fringe shift and coherence")
    {
        CHECK(fringe_shift(9.81, 1, 0.01) == doctest::Approx(-9.81e-4).epsilon(1e-15));
        CHECK(fringe_shift(0.0, 3, 1.0) == 0.0);
        EnsembleModel e;
        e.mass = 1e6 * amu;
        e.velocity_spread = 2.0;
        CHECK(coherence_ft(e, 0.0) == 1.0);
        const double s = constants::hbar / (e.mass * e.velocity_spread);
        CHECK(coherence_ft(e, s) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
        e.coherence = [](double x) { return x == 0.0 ? 1.0 : 0.25; };
        CHECK(coherence_ft(e, s) == 0.25);
    }

    TEST_CASE("validation")
    {
        auto s = reference_setup();
        s.sequence.tau = 2.0 * s.sequence.T;
        CHECK_THROWS_AS(fringe(s), DomainError);
        s = reference_setup();
        s.ensemble.cloud_extension = 50.0 * s.sequence.d;
        CHECK_THROWS_AS(fringe(s), DomainError);
        s = reference_setup();
        s.sequence.N = 0;
        CHECK_THROWS_AS(fringe(s), DomainError);
    }

    TEST_CASE("visibility against the closed expression")
    {
        for (double t : {0.3, 0.8, 1.0, 1.37, 2.0}) {
            const auto f = fringe(reference_setup(t));
            CHECK(f.V_sin == doctest::Approx(v_sin_formula(8, 8, 4, 8, t)).epsilon(1e-10));
        }
        const auto f = fringe(reference_setup(1.0));
        CHECK(f.V_sin == doctest::Approx(0.847438571774557).epsilon(1e-10));
        CHECK(f.S0 == doctest::Approx(8.86998996987200e-3).epsilon(1e-12));
        CHECK(f.V >= 0.0);
        CHECK(f.V <= 1.0);
    }

    TEST_CASE("sinusoidal visibility can exceed one")
    {
        const auto f = fringe(reference_setup(0.912));
        CHECK(f.V_sin > 1.0);
        CHECK(f.V <= 1.0);
        CHECK(visibility_sin(reference_setup(0.912)) == doctest::Approx(f.V_sin).epsilon(1e-15));
    }

    TEST_CASE("first pulse without absorption gives a flat signal")
    {
        auto s = reference_setup(1.0);
        s.pulses[0] = {0.0, 6.0, 0.0};
        CHECK(visibility_sin(s) < 1e-14);
        CHECK(fringe(s).V < 1e-12);
    }

    TEST_CASE("inverse detection")
    {
        auto s = reference_setup(1.0);
        s.third_mode = DetectionMode::inverse;
        const auto f = fringe(s);
        CHECK(f.S0 == doctest::Approx(8.86998996987200e-3 / 0.207001921223987 * (1.0 - 0.207001921223987)).epsilon(1e-11));
        s.pulses[2] = {0.0, 0.0, 0.0};
        CHECK_THROWS_AS(visibility_sin(s), DegenerateSignalError);
    }

    TEST_CASE("acceleration is a rigid shift of the signal")
    {
        auto s = reference_setup(1.0);
        s.sequence.N = 2;
        s.sequence.tau = 1e-7;
        const double a = 3.3e-6;
        auto moved = s;
        moved.sequence.acceleration = a;
        const double dx = fringe_shift(a, s.sequence.N, s.sequence.T);
        for (double x : {0.0, 0.21, 0.5, 0.93}) {
            const double xs = x * s.sequence.d;
            CHECK(std::abs(signal(moved, xs) - signal(s, xs - dx)) < 1e-10 * fringe(s).S0);
        }
    }

    TEST_CASE("resonance approximation against the full double sum")
    {
        auto s = reference_setup(1.0);
        s.ensemble.velocity_spread = 1e3 * constants::hbar / (s.ensemble.mass * s.sequence.d);
        for (double t : {1.0, 0.6}) {
            s.sequence.T = t * talbot_time(s.ensemble.mass, s.sequence.d);
            const auto res = density_resonant_components(s.sequence, s.ensemble, s.pulses[0], s.pulses[1]);
            const auto gen = density_general_components(s.sequence.T, s.sequence.second_interval(), s.sequence.d,
                                                        s.ensemble, s.pulses[0], s.pulses[1]);
            for (int l = -6; l <= 6; ++l) {
                CHECK(std::abs(res[l] - gen[l]) <= 1e-6 * std::abs(res[0]));
            }
            const std::vector<double> grid{0.0, 0.25 * s.sequence.d, 0.5 * s.sequence.d};
            const auto a = density_resonant(s.sequence, s.ensemble, s.pulses[0], s.pulses[1], grid);
            const auto b = density_general(s.sequence.T, s.sequence.T, s.sequence.d, s.ensemble, s.pulses[0], s.pulses[1], grid);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-6));
            }
        }
    }

    TEST_CASE("density is positive and normalized")
    {
        const auto s = reference_setup(1.0);
        const auto series = density_resonant_components(s.sequence, s.ensemble, s.pulses[0], s.pulses[1]);
        CHECK(series[0].real() == doctest::Approx(0.207001921223987 * 0.207001921223987).epsilon(1e-12));
        for (int i = 0; i < 64; ++i) {
            CHECK(series.value(s.sequence.d * i / 64.0).real() > -1e-14);
        }
    }

    TEST_CASE("visibility helpers")
    {
        FourierSeries flat{1.0, {0.0, 2.0, 0.0}};
        CHECK(visibility_full(flat, 256) == 0.0);
        CHECK(visibility_sin(flat) == 0.0);
        FourierSeries wave{1.0, {0.5, 2.0, 0.5}};
        CHECK(visibility_full(wave, 512) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(visibility_sin(wave) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK_THROWS_AS(visibility_full(wave, 100), DomainError);
        CHECK_THROWS_AS(visibility_sin(FourierSeries{1.0, {0.0, 0.0, 0.0}}), DegenerateSignalError);
    }

    TEST_CASE("models share the mean signal")
    {
        auto s = reference_setup(0.7);
        const double q = fringe(s).S0;
        s.model = Model::classical;
        CHECK(fringe(s).S0 == doctest::Approx(q).epsilon(1e-13));
        s.model = Model::decohered;
        s.pulses[1].nR = 7.2;
        CHECK(fringe(s).S0 == doctest::Approx(q).epsilon(1e-13));
    }
}
