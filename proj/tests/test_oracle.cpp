#include <doctest.h>

#include <cmath>
#include <numeric>

#include "otima/constants.hpp"
#include "otima/error.hpp"
#include "otima/grating.hpp"
#include "otima/oracle.hpp"
#include "otima/specfun.hpp"

using namespace otima;
using namespace otima::oracle;

namespace {

interferometer::Setup mc_setup(double t_ratio, double n0)
{
    interferometer::Setup s;
    const double mass = 1e6 * constants::atomic_mass_unit;
    s.sequence.d = 78.815e-9;
    s.sequence.T = t_ratio * interferometer::talbot_time(mass, s.sequence.d);
    s.ensemble.mass = mass;
    s.ensemble.velocity_spread = 1.0;
    s.ensemble.cloud_extension = 1e-3;
    const auto g = n0 > 0.0 ? grating::GratingPulse::from_beta(n0, 1.0) : grating::GratingPulse{};
    s.pulses = {g, g, g};
    s.model = interferometer::Model::classical;
    return s;
}

double dipole_exact(double y)
{
    return 1.5 * (specfun::spherical_j0(y) - specfun::spherical_j1_over_x(y));
}

}  // namespace

TEST_SUITE("oracle")
{
    TEST_CASE("quadrature spec")
    {
        CHECK_NOTHROW(QuadratureSpec{}.validate());
        CHECK_THROWS_AS((QuadratureSpec{32}.validate()), DomainError);
        QuadratureSpec bad;
        bad.tolerance = 0.0;
        CHECK_THROWS_AS(bad.validate(), DomainError);
        QuadratureSpec tight;
        tight.max_count = 128;
        // a rough integrand cannot converge on 128 points
        CHECK_THROWS_AS(b_by_quadrature(3, {400.0, 300.0, 0.0}, tight), PrecisionError);
    }

    TEST_CASE("series oracle")
    {
        CHECK(bessel_j_series(2, 4.0) == doctest::Approx(0.3641281459).epsilon(1e-10));
        CHECK(bessel_j_series(-3, 2.0) == doctest::Approx(-bessel_j_series(3, 2.0)).epsilon(1e-15));
        CHECK(bessel_i_series(0, {4.0, 0.0}).real() == doctest::Approx(11.3019219521).epsilon(1e-11));
        CHECK(bessel_i_series(0, {0.0, 0.0}) == complex{1.0, 0.0});
    }

    TEST_CASE("transmission coefficients by quadrature")
    {
        for (int n = -3; n <= 3; ++n) {
            CHECK(std::abs(b_by_quadrature(n, {0.0, 0.0, 0.0}).value - complex{n == 0 ? 1.0 : 0.0, 0.0}) < 1e-15);
        }
        for (double n0 : {1.0, 8.0}) {
            for (double phi0 : {-4.0, 0.0, 4.0}) {
                const grating::GratingPulse p{n0, phi0, 0.0};
                const grating::PulseCoefficients pc(p);
                for (int n = 0; n <= 8; ++n) {
                    CHECK(std::abs(b_by_quadrature(n, p).value - grating::fourier_b(n, p)) < 1e-10);
                }
                CHECK(std::abs(b_by_quadrature(pc.truncation() + 1, p).value) < 1e-14);
            }
        }
    }

    TEST_CASE("kernel quadrature")
    {
        const grating::GratingPulse p{8.0, 0.0, 0.0};
        CHECK(B_by_kernel_quadrature(2, 1.0, p).value.real() == doctest::Approx(0.117626).epsilon(1e-8 / 0.117626 + 5e-6));
        CHECK(std::abs(B_by_kernel_quadrature(2, 1.0, p).value.real() - 0.117626501472769) < 1e-8);
        for (int n = 0; n <= 3; ++n) {
            CHECK(std::abs(B_by_kernel_quadrature(n, 0.0, {8.0, 3.0, 0.0}).value - grating::tl_mask(n, 8.0)) < 1e-13);
        }
    }

    TEST_CASE("refinement drives the error down")
    {
        // Periodic trapezoid rule: converges geometrically, so a looser
        // tolerance stops earlier without losing accuracy here.
        const grating::GratingPulse p{200.0, 150.0, 0.0};
        const complex exact = grating::fourier_b(5, p);
        QuadratureSpec loose;
        loose.tolerance = 1e-4;
        const auto a = b_by_quadrature(5, p, loose);
        const auto b = b_by_quadrature(5, p);
        CHECK(b.count > a.count);
        CHECK(std::abs(a.value - exact) < 1e-4);
        CHECK(std::abs(b.value - exact) < 1e-12);

        // Gauss-Legendre on the sphere: each doubling cuts the error by far
        // more than the factor 4 of a second-order rule until round-off.
        const double y = 5.0;
        double previous = std::abs(dipole_average(y, {4, 4}) - dipole_exact(y));
        for (int n : {8, 16}) {
            const double err = std::abs(dipole_average(y, {n, n}) - dipole_exact(y));
            CHECK(err <= 0.25 * previous + 1e-14);
            previous = err;
        }
        CHECK(std::abs(dipole_average(y) - dipole_exact(y)) < 1e-13);
        CHECK(std::abs(dipole_average(30.0) - dipole_exact(30.0)) < 1e-13);
        CHECK(std::abs(dipole_average(0.0) - 1.0) < 1e-14);
    }

    TEST_CASE("Gauss-Legendre rule")
    {
        std::vector<double> x;
        std::vector<double> w;
        gauss_legendre(20, x, w);
        CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(2.0).epsilon(1e-14));
        double moment = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            moment += w[i] * std::pow(x[i], 38);
        }
        CHECK(moment == doctest::Approx(2.0 / 39.0).epsilon(1e-13));
        QuadratureSpec gl;
        gl.scheme = Scheme::gauss_legendre;
        CHECK(std::abs(b_by_quadrature(1, {2.0, 1.0, 0.0}, gl).value - grating::fourier_b(1, {2.0, 1.0, 0.0})) < 1e-12);
    }

    TEST_CASE("decoherence function")
    {
        CHECK(std::abs(decoherence_function(0.3, 0.0, 7.2) - 1.0) < 1e-14);
        CHECK(std::abs(decoherence_function(0.3, 0.8, 0.0) - 1.0) < 1e-15);
        for (int n = -2; n <= 2; ++n) {
            CHECK(std::abs(R_by_sphere_quadrature(n, 0.0, 7.2).value - complex{n == 0 ? 1.0 : 0.0, 0.0}) < 1e-14);
            CHECK(std::abs(R_by_sphere_quadrature(n, 0.6, 0.0).value - complex{n == 0 ? 1.0 : 0.0, 0.0}) < 1e-14);
        }
        for (double xi : {0.5, 1.0}) {
            for (int n = 0; n <= 2; ++n) {
                CHECK(std::abs(R_by_sphere_quadrature(n, xi, 7.2).value.real() - grating::rayleigh_R(n, xi, 7.2)) < 1e-8);
            }
        }
    }

    TEST_CASE("Monte Carlo determinism")
    {
        const auto s = mc_setup(0.15, 8.0);
        const auto a = classical_mc(s, 100000, 99, 1);
        const auto b = classical_mc(s, 100000, 99, 3);
        const auto c = classical_mc(s, 100000, 100, 1);
        CHECK(a.fringe.signal.coefficients == b.fringe.signal.coefficients);
        CHECK(a.S0_error == b.S0_error);
        CHECK(a.fringe.signal.coefficients != c.fringe.signal.coefficients);
        CHECK_THROWS_AS(classical_mc(s, 99999, 1), DomainError);
    }

    TEST_CASE("Monte Carlo against the classical closed form")
    {
        const auto s = mc_setup(0.15, 8.0);
        const auto closed = interferometer::fringe(s);
        const auto mc = classical_mc(s, 400000, 5);
        CHECK(!mc.inconclusive);
        CHECK(std::abs(mc.fringe.S0 - closed.S0) <= 5.0 * mc.S0_error);
        CHECK(std::abs(mc.fringe.signal[1].real() - closed.signal[1].real()) <= 5.0 * mc.S1_error.real());
        CHECK(std::abs(mc.fringe.V_sin - closed.V_sin) <= 5.0 * mc.V_sin_error);
    }

    TEST_CASE("Monte Carlo error scales as one over the square root of the samples")
    {
        const auto s = mc_setup(0.15, 8.0);
        const auto small = classical_mc(s, 100000, 8);
        const auto large = classical_mc(s, 400000, 8);
        CHECK(small.S0_error / large.S0_error == doctest::Approx(2.0).epsilon(0.1));
        CHECK(small.S1_error.real() / large.S1_error.real() == doctest::Approx(2.0).epsilon(0.1));
    }

    TEST_CASE("Monte Carlo without light")
    {
        const auto mc = classical_mc(mc_setup(1.0, 0.0), 100000, 3);
        CHECK(mc.fringe.S0 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(mc.fringe.V_sin < 1e-12);
    }
}
