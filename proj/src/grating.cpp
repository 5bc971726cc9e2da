#include "otima/grating.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "otima/constants.hpp"
#include "otima/error.hpp"
#include "otima/specfun.hpp"

namespace otima::grating {

namespace {

using constants::pi;

// Relative cut for the b_j series.
constexpr double b_truncation = 1e-16;

// e^{i pi xi m}
complex shear_phase(double xi, int m)
{
    const double turns = std::fmod(xi * static_cast<double>(m), 2.0);
    return std::polar(1.0, pi * turns);
}

template <typename T>
T symmetric_at(const std::vector<T>& half, int n)
{
    const auto k = static_cast<std::size_t>(std::abs(n));
    return k < half.size() ? half[k] : T{};
}

int cut_relative(const std::vector<complex>& seq, double tolerance)
{
    double largest = 0.0;
    for (const auto& v : seq) {
        largest = std::max(largest, std::abs(v));
    }
    int last = static_cast<int>(seq.size()) - 1;
    while (last > 0 && std::abs(seq[last]) < tolerance * largest) {
        --last;
    }
    return last;
}

}  // namespace

GratingPulse GratingPulse::from_beta(double n0, double beta, double rayleigh_ratio)
{
    if (beta == 0.0 || !std::isfinite(beta)) {
        throw SingularityError("beta must be finite and non-zero to derive the phase parameter");
    }
    return {n0, n0 / (2.0 * beta), n0 * rayleigh_ratio};
}

void GratingPulse::validate() const
{
    if (!(n0 >= 0.0) || !std::isfinite(n0)) {
        throw DomainError("grating pulse: n0 must be finite and non-negative");
    }
    if (!(nR >= 0.0) || !std::isfinite(nR)) {
        throw DomainError("grating pulse: nR must be finite and non-negative");
    }
    if (!std::isfinite(phi0)) {
        throw DomainError("grating pulse: phi0 must be finite");
    }
}

complex transmission(double x, double d, const GratingPulse& pulse)
{
    if (!(d > 0.0)) {
        throw DomainError("transmission: grating period must be positive");
    }
    const double c = std::cos(pi * x / d);
    return std::exp(complex{-0.5 * pulse.n0, pulse.phi0} * (c * c));
}

PulseCoefficients::PulseCoefficients(const GratingPulse& pulse) : pulse_(pulse)
{
    pulse_.validate();
    // b_n = e^z I_n(z) with z = -n0/4 + i phi0/2; Re z <= 0 so
    // e^{Re z} I_n(z) is exactly the exponentially scaled Bessel function.
    const complex z{-0.25 * pulse_.n0, 0.5 * pulse_.phi0};
    auto seq = specfun::bessel_ive_sequence(z);
    const complex phase = std::polar(1.0, z.imag());
    for (auto& v : seq) {
        v *= phase;
    }
    truncation_ = cut_relative(seq, b_truncation);
    seq.resize(static_cast<std::size_t>(truncation_) + 1);
    b_ = std::move(seq);

    const auto mask_seq = specfun::bessel_ive_sequence(complex{-0.5 * pulse_.n0, 0.0});
    mask_.reserve(mask_seq.size());
    for (const auto& v : mask_seq) {
        mask_.push_back(v.real());
    }
}

complex PulseCoefficients::b(int n) const { return symmetric_at(b_, n); }

double PulseCoefficients::mask(int n) const { return symmetric_at(mask_, n); }

complex PulseCoefficients::quantum(int n, double xi) const
{
    const int J = truncation_;
    const int lo = std::max(-J, n - J);
    const int hi = std::min(J, n + J);
    complex sum{};
    for (int j = lo; j <= hi; ++j) {
        sum += b(j) * std::conj(b(j - n)) * shear_phase(xi, n - 2 * j);
    }
    return sum;
}

complex PulseCoefficients::classical(int n, double xi) const
{
    // exp(-zi cos t + i zc sin t) = [sum_m mask_m e^{imt}] [sum_k J_k(zc) e^{ikt}]
    const double zc = pulse_.phi0 * pi * xi;
    const auto jseq = specfun::bessel_j_sequence(zc);
    const int K = static_cast<int>(jseq.size()) - 1;
    const int M = static_cast<int>(mask_.size()) - 1;
    double sum = 0.0;
    for (int k = std::max(-K, n - M); k <= std::min(K, n + M); ++k) {
        double jk = jseq[static_cast<std::size_t>(std::abs(k))];
        if (k < 0 && (-k) % 2 == 1) {
            jk = -jk;
        }
        sum += mask(n - k) * jk;
    }
    return {sum, 0.0};
}

complex PulseCoefficients::decohered(int n, double xi) const
{
    if (pulse_.nR == 0.0 || xi == 0.0) {
        return quantum(n, xi);
    }
    const auto r = rayleigh_sequence(xi, pulse_.nR);
    const int K = static_cast<int>(r.size()) - 1;
    const int support = 2 * truncation_;
    complex sum{};
    for (int j = std::max(-support, n - K); j <= std::min(support, n + K); ++j) {
        sum += symmetric_at(r, n - j) * quantum(j, xi);
    }
    return sum;
}

std::vector<double> rayleigh_sequence(double xi, double nR)
{
    if (!(nR >= 0.0)) {
        throw DomainError("rayleigh_R: nR must be non-negative");
    }
    if (nR == 0.0 || xi == 0.0) {
        return {1.0};
    }
    const double x = pi * xi;
    const double g = specfun::spherical_j0(x) - specfun::spherical_j1_over_x(x);
    const double c = std::cos(x);
    const double scale = 0.75 * nR;
    const double exponent = scale * (g * c - 2.0 / 3.0);
    const double argument = scale * (g - 2.0 / 3.0 * c);
    const auto seq = specfun::bessel_ive_sequence(complex{argument, 0.0});
    // e^{A} I_k(y) = e^{A + |y|} [e^{-|y|} I_k(y)]
    const double weight = std::exp(exponent + std::abs(argument));
    std::vector<double> out(seq.size());
    for (std::size_t k = 0; k < seq.size(); ++k) {
        out[k] = weight * seq[k].real();
    }
    return out;
}

complex fourier_b(int n, const GratingPulse& pulse) { return PulseCoefficients(pulse).b(n); }

complex tl_quantum(int n, double xi, const GratingPulse& pulse)
{
    return PulseCoefficients(pulse).quantum(n, xi);
}

double tl_mask(int n, double n0)
{
    if (!(n0 >= 0.0)) {
        throw DomainError("tl_mask: n0 must be non-negative");
    }
    return specfun::bessel_ive(n, complex{-0.5 * n0, 0.0}).real();
}

double inverse_mask(int n, double n0) { return (n == 0 ? 1.0 : 0.0) - tl_mask(n, n0); }

complex tl_classical(int n, double xi, const GratingPulse& pulse)
{
    return PulseCoefficients(pulse).classical(n, xi);
}

double rayleigh_R(int n, double xi, double nR) { return symmetric_at(rayleigh_sequence(xi, nR), n); }

complex tl_decohered(int n, double xi, const GratingPulse& pulse)
{
    return PulseCoefficients(pulse).decohered(n, xi);
}

Zeta quantum_zeta(double xi, const GratingPulse& pulse)
{
    return {0.5 * pulse.n0 * std::cos(pi * xi), pulse.phi0 * std::sin(pi * xi)};
}

Zeta classical_zeta(double xi, const GratingPulse& pulse) { return {0.5 * pulse.n0, pulse.phi0 * pi * xi}; }

complex tl_closed_form(int n, Zeta zeta, double n0)
{
    const double s = zeta.coh + zeta.ion;
    if (s == 0.0) {
        throw DomainError("tl_closed_form: undefined at zeta_coh + zeta_ion = 0");
    }
    const double envelope = std::exp(-0.5 * n0);
    const double r = (zeta.coh - zeta.ion) / s;
    if (r == 0.0) {
        // q^n J_n(s q) as q -> 0
        if (n == 0) {
            return envelope;
        }
        if (n > 0) {
            return 0.0;
        }
        const int m = -n;
        double term = 1.0;
        for (int k = 1; k <= m; ++k) {
            term *= -0.5 * s / k;
        }
        return envelope * term;
    }
    if (r > 0.0) {
        const double q = std::sqrt(r);
        return envelope * std::pow(q, n) * specfun::bessel_j(n, s * q);
    }
    // q = i sqrt(-r):  q^n J_n(i s sqrt(-r)) = (-1)^n (-r)^{n/2} I_n(s sqrt(-r))
    const double q = std::sqrt(-r);
    const double sign = (std::abs(n) % 2 == 1) ? -1.0 : 1.0;
    return envelope * sign * std::pow(q, n) * specfun::bessel_i(n, complex{s * q, 0.0}).real();
}

}  // namespace otima::grating
