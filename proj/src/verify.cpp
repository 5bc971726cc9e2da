#include "otima/verify.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "otima/constants.hpp"
#include "otima/error.hpp"
#include "otima/interferometer.hpp"
#include "otima/oracle.hpp"
#include "otima/specfun.hpp"

namespace otima::verify {

namespace {

using grating::GratingPulse;

std::string label(const char* fmt, double a, double b = 0, double c = 0, double d = 0)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, fmt, a, b, c, d);
    return buf;
}

template <typename Closed, typename Oracle>
void compare(Report& report, std::string name, double tolerance, Closed&& closed, Oracle&& oracle)
{
    Check c;
    c.name = std::move(name);
    c.tolerance = tolerance;
    try {
        c.oracle = oracle();
    } catch (const PrecisionError& e) {
        c.status = Status::precision;
        c.note = e.what();
        report.checks.push_back(std::move(c));
        return;
    }
    try {
        c.closed = closed();
        c.deviation = std::abs(c.closed - c.oracle);
        if (!(c.deviation <= tolerance)) {
            c.status = Status::mismatch;
        }
    } catch (const std::exception& e) {
        c.status = Status::mismatch;
        c.note = e.what();
    }
    report.checks.push_back(std::move(c));
}

void bessel_checks(Report& r, const Evaluators& impl)
{
    for (int n : {0, 1, 2, 5, 20, 100, 200}) {
        for (double x : {0.5, 4.0, 25.0, 137.5, 500.0}) {
            const double ref = oracle::bessel_j_series(n, x);
            compare(
                r, label("bessel_j n=%g x=%g", n, x), 1e-10 * std::abs(ref) + 1e-15,
                [&] { return complex{impl.bessel_j(n, x), 0.0}; }, [&] { return complex{ref, 0.0}; });
        }
    }
    const complex args[] = {{4.0, 0.0}, {2.0, -5.0}, {-3.0, 1.0}, {0.0, 30.0}, {100.0, 0.0}, {-2.0, -0.5}};
    for (int n : {0, 1, 3, 10}) {
        for (const complex z : args) {
            const complex ref = oracle::bessel_i_series(n, z);
            const double tol = 1e-10 * std::abs(ref) + 1e-15 * std::exp(std::abs(z.real()));
            compare(
                r, label("bessel_i n=%g z=%g%+gi", n, z.real(), z.imag()), tol,
                [&] { return impl.bessel_i(n, z); }, [&] { return ref; });
        }
    }
}

void grating_checks(Report& r, const Evaluators& impl)
{
    for (double n0 : {1.0, 8.0}) {
        for (double phi0 : {-4.0, 0.0, 4.0}) {
            const GratingPulse p{n0, phi0, 0.0};
            for (int n : {0, 1, 2, 3, 6}) {
                compare(
                    r, label("fourier_b n=%g n0=%g phi0=%g", n, n0, phi0), 1e-10,
                    [&] { return impl.fourier_b(n, p); }, [&] { return oracle::b_by_quadrature(n, p).value; });
            }
        }
    }

    const GratingPulse pulses[] = {{8.0, 0.0, 0.0}, {8.0, 4.0, 0.0}, {3.0, -2.3, 0.0}};
    for (const auto& p : pulses) {
        for (double xi : {0.0, 0.25, 1.0, 1.7}) {
            for (int n : {0, 1, 2, -3}) {
                compare(
                    r, label("tl_quantum n=%g xi=%g n0=%g phi0=%g", n, xi, p.n0, p.phi0), 1e-10,
                    [&] { return impl.tl_quantum(n, xi, p); },
                    [&] { return oracle::B_by_kernel_quadrature(n, xi, p).value; });
                compare(
                    r, label("tl_classical n=%g xi=%g n0=%g phi0=%g", n, xi, p.n0, p.phi0), 1e-10,
                    [&] { return impl.tl_classical(n, xi, p); },
                    [&] { return oracle::B_classical_by_quadrature(n, xi, p).value; });
            }
        }
    }

    // Closed Bessel form on both sides of zeta_coh = zeta_ion; the
    // convolution is the reference here.
    const GratingPulse p{8.0, 4.0, 0.0};
    for (double xi : {0.1, 0.4, 1.3, 1.9}) {
        const auto zeta = grating::quantum_zeta(xi, p);
        const char* branch = (zeta.coh - zeta.ion) / (zeta.coh + zeta.ion) >= 0.0 ? "J" : "I";
        for (int n : {0, 1, 2, 5}) {
            compare(
                r, label("tl_closed_form n=%g xi=%g", n, xi) + " branch " + branch, 1e-10,
                [&] { return grating::tl_closed_form(n, zeta, p.n0); }, [&] { return impl.tl_quantum(n, xi, p); });
        }
    }

    for (double xi : {0.5, 1.0}) {
        for (int n : {0, 1, 2}) {
            compare(
                r, label("rayleigh_R n=%g xi=%g nR=7.2", n, xi), 1e-8,
                [&] { return complex{impl.rayleigh_R(n, xi, 7.2), 0.0}; },
                [&] { return oracle::R_by_sphere_quadrature(n, xi, 7.2).value; });
        }
    }

    const GratingPulse scattering{8.0, 4.0, 7.2};
    for (double xi : {0.5, 1.05}) {
        for (int n : {0, 2}) {
            compare(
                r, label("tl_decohered n=%g xi=%g nR=7.2", n, xi), 1e-10,
                [&] { return impl.tl_decohered(n, xi, scattering); },
                [&] { return oracle::B_decohered_by_quadrature(n, xi, scattering).value; });
        }
    }
}

void monte_carlo_checks(Report& r, std::uint64_t seed)
{
    const double mass = 1e6 * constants::atomic_mass_unit;
    for (double t_ratio : {0.15, 1.0}) {
        interferometer::Setup s;
        s.sequence.d = 78.815e-9;
        s.sequence.T = t_ratio * interferometer::talbot_time(mass, s.sequence.d);
        s.ensemble.mass = mass;
        s.ensemble.velocity_spread = 1.0;
        s.ensemble.cloud_extension = 1e-3;
        const auto g = GratingPulse::from_beta(8.0, 1.0);
        s.pulses = {g, g, g};
        s.model = interferometer::Model::classical;

        const auto closed = interferometer::fringe(s);
        const auto mc = oracle::classical_mc(s, 1000000, seed);
        const auto add = [&](const std::string& what, double c, double o, double sigma) {
            Check check;
            check.name = label("classical_mc T/TT=%g ", t_ratio) + what;
            check.closed = c;
            check.oracle = o;
            check.tolerance = 5.0;
            check.note = "deviation in standard errors";
            if (mc.inconclusive || !(sigma > 0.0)) {
                check.status = Status::precision;
                check.note = "statistical error too large, inconclusive";
            } else {
                check.deviation = std::abs(c - o) / sigma;
                check.status = check.deviation <= 5.0 ? Status::pass : Status::mismatch;
            }
            r.checks.push_back(std::move(check));
        };
        add("S0", closed.S0, mc.fringe.S0, mc.S0_error);
        add("Re S1", closed.signal[1].real(), mc.fringe.signal[1].real(), mc.S1_error.real());
        add("Im S1", closed.signal[1].imag(), mc.fringe.signal[1].imag(), mc.S1_error.imag());
        if (closed.V_sin > 0.05) {
            add("V_sin", closed.V_sin, mc.fringe.V_sin, mc.V_sin_error);
        }
    }
}

}  // namespace

Evaluators Evaluators::library()
{
    Evaluators e;
    e.bessel_j = [](int n, double x) { return specfun::bessel_j(n, x); };
    e.bessel_i = [](int n, complex z) { return specfun::bessel_i(n, z); };
    e.fourier_b = [](int n, const GratingPulse& p) { return grating::fourier_b(n, p); };
    e.tl_quantum = [](int n, double xi, const GratingPulse& p) { return grating::tl_quantum(n, xi, p); };
    e.tl_classical = [](int n, double xi, const GratingPulse& p) { return grating::tl_classical(n, xi, p); };
    e.rayleigh_R = [](int n, double xi, double nR) { return grating::rayleigh_R(n, xi, nR); };
    e.tl_decohered = [](int n, double xi, const GratingPulse& p) { return grating::tl_decohered(n, xi, p); };
    return e;
}

bool Report::ok() const { return exit_code() == 0; }

int Report::exit_code() const
{
    bool precision = false;
    for (const auto& c : checks) {
        if (c.status == Status::mismatch) {
            return 4;
        }
        precision = precision || c.status == Status::precision;
    }
    return precision ? 3 : 0;
}

std::string Report::text() const
{
    std::ostringstream out;
    int failed = 0;
    char buf[320];
    for (const auto& c : checks) {
        const char* tag = c.status == Status::pass ? "PASS" : (c.status == Status::mismatch ? "FAIL" : "PREC");
        std::snprintf(buf, sizeof buf, "%s  %-48s closed=%.12g%+.12gi oracle=%.12g%+.12gi dev=%.2e tol=%.1e", tag,
                      c.name.c_str(), c.closed.real(), c.closed.imag(), c.oracle.real(), c.oracle.imag(), c.deviation,
                      c.tolerance);
        out << buf;
        if (c.status != Status::pass && !c.note.empty()) {
            out << "  (" << c.note << ')';
        }
        out << '\n';
        failed += c.status != Status::pass;
    }
    out << checks.size() - failed << '/' << checks.size() << " checks passed\n";
    return out.str();
}

Report run(Level level, const Evaluators& impl, std::uint64_t seed)
{
    Report r;
    bessel_checks(r, impl);
    grating_checks(r, impl);
    if (level == Level::full) {
        monte_carlo_checks(r, seed);
    }
    return r;
}

}  // namespace otima::verify
