#include "otima/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "otima/constants.hpp"
#include "otima/error.hpp"

namespace otima::oracle {

namespace {

using constants::pi;
using wide = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<300>>;

// Terms stop mattering once they fall this far below the running sum.
const wide series_cut("1e-80");

struct WideComplex {
    wide re;
    wide im;
};

WideComplex mul(const WideComplex& a, const WideComplex& b)
{
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

// sum_k (sign)^k (z/2)^{2k+n} / (k!(n+k)!) with sign = -1 for J, +1 for I.
WideComplex bessel_series(int n, complex z, int sign)
{
    const WideComplex half{wide(z.real()) / 2, wide(z.imag()) / 2};
    WideComplex term{1, 0};
    for (int k = 1; k <= n; ++k) {
        term = mul(term, half);
        term.re /= k;
        term.im /= k;
    }
    WideComplex quarter = mul(half, half);
    if (sign < 0) {
        quarter.re = -quarter.re;
        quarter.im = -quarter.im;
    }
    WideComplex sum = term;
    const double magnitude = std::abs(z);
    for (int k = 0;; ++k) {
        term = mul(term, quarter);
        const wide denom = wide(k + 1) * wide(n + k + 1);
        term.re /= denom;
        term.im /= denom;
        sum.re += term.re;
        sum.im += term.im;
        const wide size = abs(term.re) + abs(term.im);
        const wide total = abs(sum.re) + abs(sum.im);
        if (k > magnitude && (size == 0 || size < series_cut * total)) {
            break;
        }
    }
    return sum;
}

}  // namespace

void QuadratureSpec::validate() const
{
    if (count < 64) {
        throw DomainError("quadrature: abscissa count must be at least 64");
    }
    if (!(tolerance > 0.0)) {
        throw DomainError("quadrature: tolerance must be positive");
    }
}

double bessel_j_series(int n, double x)
{
    const int m = std::abs(n);
    const double value = static_cast<double>(bessel_series(m, complex{x, 0.0}, -1).re);
    return (n < 0 && m % 2 == 1) ? -value : value;
}

complex bessel_i_series(int n, complex z)
{
    const auto v = bessel_series(std::abs(n), z, +1);
    return {static_cast<double>(v.re), static_cast<double>(v.im)};
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights)
{
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double step = p1 / dp;
            x -= step;
            if (std::abs(step) < 1e-16) {
                break;
            }
        }
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

QuadratureResult b_by_quadrature(int n, const grating::GratingPulse& pulse, const QuadratureSpec& spec)
{
    const complex exponent{-0.5 * pulse.n0, pulse.phi0};
    return periodic_mean(
        [&](double u) {
            const double c = std::cos(pi * u);
            return std::exp(exponent * (c * c)) * std::polar(1.0, -2.0 * pi * n * u);
        },
        spec);
}

QuadratureResult B_by_kernel_quadrature(int n, double xi, const grating::GratingPulse& pulse,
                                        const QuadratureSpec& spec)
{
    const complex exponent{-0.5 * pulse.n0, pulse.phi0};
    const auto t = [&](double u) {
        const double c = std::cos(pi * u);
        return std::exp(exponent * (c * c));
    };
    return periodic_mean(
        [&](double u) {
            return t(u - 0.5 * xi) * std::conj(t(u + 0.5 * xi)) * std::polar(1.0, -2.0 * pi * n * u);
        },
        spec);
}

QuadratureResult B_classical_by_quadrature(int n, double xi, const grating::GratingPulse& pulse,
                                           const QuadratureSpec& spec)
{
    return periodic_mean(
        [&](double u) {
            const double c = std::cos(pi * u);
            // |t|^2 and the phase -s dphi/dx with s = xi d
            const double kick_phase = pi * xi * pulse.phi0 * std::sin(2.0 * pi * u);
            return std::exp(-pulse.n0 * c * c) * std::polar(1.0, kick_phase - 2.0 * pi * n * u);
        },
        spec);
}

complex dipole_average(double y, const SphereSpec& sphere)
{
    std::vector<double> nodes;
    std::vector<double> weights;
    gauss_legendre(sphere.polar, nodes, weights);
    const double dphi = 2.0 * pi / sphere.azimuth;
    complex sum{};
    for (int i = 0; i < sphere.polar; ++i) {
        const double cos_theta = nodes[i];
        const double sin2 = 1.0 - cos_theta * cos_theta;
        const double sin_theta = std::sqrt(sin2);
        complex ring{};
        for (int j = 0; j < sphere.azimuth; ++j) {
            ring += std::polar(1.0, y * sin_theta * std::cos(j * dphi));
        }
        sum += weights[i] * 3.0 * sin2 / (8.0 * pi) * ring * dphi;
    }
    return sum;
}

namespace {

complex eta_with(complex dipole, double x, double s, double nR)
{
    // k_L = pi/d; positions in units of d.
    const double c1 = std::cos(pi * (x - 0.5 * s));
    const double c2 = std::cos(pi * (x + 0.5 * s));
    return std::exp(0.5 * nR * (2.0 * dipole * c1 * c2 - c1 * c1 - c2 * c2));
}

}  // namespace

complex decoherence_function(double x, double s, double nR, const SphereSpec& sphere)
{
    return eta_with(dipole_average(pi * s, sphere), x, s, nR);
}

QuadratureResult R_by_sphere_quadrature(int n, double xi, double nR, const SphereSpec& sphere,
                                        const QuadratureSpec& spec)
{
    const complex coarse = dipole_average(pi * xi, sphere);
    const complex fine = dipole_average(pi * xi, {2 * sphere.polar, 2 * sphere.azimuth});
    if (std::abs(coarse - fine) > 1e-13) {
        throw PrecisionError("sphere quadrature of the dipole pattern not converged");
    }
    return periodic_mean(
        [&](double u) { return eta_with(fine, u, xi, nR) * std::polar(1.0, -2.0 * pi * n * u); }, spec);
}

QuadratureResult B_decohered_by_quadrature(int n, double xi, const grating::GratingPulse& pulse,
                                           const SphereSpec& sphere, const QuadratureSpec& spec)
{
    const complex dipole = dipole_average(pi * xi, {2 * sphere.polar, 2 * sphere.azimuth});
    if (std::abs(dipole - dipole_average(pi * xi, sphere)) > 1e-13) {
        throw PrecisionError("sphere quadrature of the dipole pattern not converged");
    }
    const complex exponent{-0.5 * pulse.n0, pulse.phi0};
    const auto t = [&](double u) {
        const double c = std::cos(pi * u);
        return std::exp(exponent * (c * c));
    };
    return periodic_mean(
        [&](double u) {
            return t(u - 0.5 * xi) * std::conj(t(u + 0.5 * xi)) * eta_with(dipole, u, xi, pulse.nR)
                   * std::polar(1.0, -2.0 * pi * n * u);
        },
        spec);
}

namespace {

struct McPartial {
    double w = 0.0;
    double ww = 0.0;
    // l = 1, 2 : weighted cos / sin of 2 pi l x2 / d, plus second moments
    double c[3] = {0.0, 0.0, 0.0};
    double s[3] = {0.0, 0.0, 0.0};
    double cc1 = 0.0;
    double ss1 = 0.0;
    double wc1 = 0.0;
};

McPartial run_chunk(const interferometer::Setup& setup, long long count, std::uint64_t seed, long long chunk)
{
    const auto& seq = setup.sequence;
    const auto& ens = setup.ensemble;
    const double d = seq.d;
    const double m = ens.mass;
    const double a = seq.acceleration;
    const double T1 = seq.T;
    const double T2 = seq.second_interval();
    const auto& p1 = setup.pulses[0];
    const auto& p2 = setup.pulses[1];

    std::seed_seq seeds{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
    std::mt19937_64 engine(seeds);
    std::uniform_real_distribution<double> uniform(0.0, d);
    std::normal_distribution<double> momentum(0.0, m * ens.velocity_spread);

    const auto kick = [&](const grating::GratingPulse& p, double x) {
        // hbar d/dx [phi0 cos^2(pi x/d)]
        return -constants::hbar * pi * p.phi0 / d * std::sin(2.0 * pi * x / d);
    };
    const auto survival = [&](const grating::GratingPulse& p, double x) {
        const double c = std::cos(pi * x / d);
        return std::exp(-p.n0 * c * c);
    };

    McPartial out;
    for (long long i = 0; i < count; ++i) {
        double x = uniform(engine);
        double p = momentum(engine);
        double w = survival(p1, x);
        p += kick(p1, x);
        x += p * T1 / m + 0.5 * a * T1 * T1;
        p += m * a * T1;
        w *= survival(p2, x);
        p += kick(p2, x);
        x += p * T2 / m + 0.5 * a * T2 * T2;

        const double phase = 2.0 * pi * std::fmod(x / d, 1.0);
        const double c1 = std::cos(phase);
        const double s1 = std::sin(phase);
        out.w += w;
        out.ww += w * w;
        out.c[1] += w * c1;
        out.s[1] += w * s1;
        out.c[2] += w * (c1 * c1 - s1 * s1);
        out.s[2] += w * 2.0 * s1 * c1;
        out.cc1 += w * w * c1 * c1;
        out.ss1 += w * w * s1 * s1;
        out.wc1 += w * w * c1;
    }
    return out;
}

}  // namespace

McResult classical_mc(const interferometer::Setup& setup, long long samples, std::uint64_t seed, unsigned threads)
{
    if (samples < min_mc_samples) {
        throw DomainError("classical_mc: at least 1e5 samples required");
    }
    setup.sequence.validate();
    setup.ensemble.validate(setup.sequence.d);

    const long long chunks = (samples + mc_chunk - 1) / mc_chunk;
    std::vector<McPartial> partials(static_cast<std::size_t>(chunks));
    const auto work = [&](unsigned worker, unsigned stride) {
        for (long long c = worker; c < chunks; c += stride) {
            const long long count = std::min(mc_chunk, samples - c * mc_chunk);
            partials[static_cast<std::size_t>(c)] = run_chunk(setup, count, seed, c);
        }
    };
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<long long>(threads, chunks));
    if (threads <= 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(work, t, threads);
        }
    }

    McPartial total;
    for (const auto& p : partials) {
        total.w += p.w;
        total.ww += p.ww;
        for (int l = 1; l <= 2; ++l) {
            total.c[l] += p.c[l];
            total.s[l] += p.s[l];
        }
        total.cc1 += p.cc1;
        total.ss1 += p.ss1;
        total.wc1 += p.wc1;
    }

    const double n = static_cast<double>(samples);
    const grating::PulseCoefficients g3(setup.pulses[2]);
    const auto third = [&](int l) {
        return setup.third_mode == interferometer::DetectionMode::neutral ? g3.mask(l) : g3.inverse(l);
    };

    const double mean_w = total.w / n;
    const double mean_c = total.c[1] / n;
    const double mean_s = total.s[1] / n;
    const double var_w = total.ww / n - mean_w * mean_w;
    const double var_c = total.cc1 / n - mean_c * mean_c;
    const double var_s = total.ss1 / n - mean_s * mean_s;
    const double cov_wc = total.wc1 / n - mean_w * mean_c;

    McResult result;
    result.samples = samples;
    auto& f = result.fringe;
    f.signal.period = setup.sequence.d;
    f.signal.coefficients.assign(5, complex{});
    for (int l = -2; l <= 2; ++l) {
        const int k = std::abs(l);
        const complex moment = k == 0 ? complex{mean_w, 0.0}
                                      : complex{total.c[k] / n, (l > 0 ? 1.0 : -1.0) * total.s[k] / n};
        f.signal.coefficients[static_cast<std::size_t>(l + 2)] = third(l) * moment;
    }
    f.S0 = f.signal[0].real();
    f.shift = interferometer::fringe_shift(setup.sequence.acceleration, setup.sequence.N, setup.sequence.T);
    f.V = interferometer::visibility_full(f.signal, 256);
    f.V_sin = f.S0 > 0.0 ? 2.0 * std::abs(f.signal[1]) / f.S0 : 0.0;

    result.S0_error = std::abs(third(0)) * std::sqrt(std::max(var_w, 0.0) / n);
    result.S1_error = std::abs(third(1)) * complex{std::sqrt(std::max(var_c, 0.0) / n),
                                                   std::sqrt(std::max(var_s, 0.0) / n)};
    if (mean_w > 0.0) {
        // delta method on 2 |m1 c| / (m0 w), with the real part carrying the signal
        const double ratio = 2.0 * std::abs(third(1) * mean_c) / (std::abs(third(0)) * mean_w);
        double rel = var_w / (mean_w * mean_w);
        if (mean_c != 0.0) {
            rel += var_c / (mean_c * mean_c) - 2.0 * cov_wc / (mean_c * mean_w);
        }
        result.V_sin_error = ratio * std::sqrt(std::max(rel, 0.0) / n);
        if (mean_c == 0.0) {
            result.V_sin_error = 2.0 * std::abs(third(1)) * std::sqrt(var_c / n) / (std::abs(third(0)) * mean_w);
        }
    }
    result.inconclusive = !(f.S0 > 5.0 * result.S0_error) || !(result.V_sin_error < 0.05);
    return result;
}

}  // namespace otima::oracle
