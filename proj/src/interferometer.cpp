#include "otima/interferometer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#include "otima/constants.hpp"
#include "otima/error.hpp"

namespace otima::interferometer {

namespace {

using constants::pi;
using grating::PulseCoefficients;

complex coefficient(const PulseCoefficients& pc, int n, double xi, Model model)
{
    switch (model) {
        case Model::classical: return pc.classical(n, xi);
        case Model::decohered: return pc.decohered(n, xi);
        case Model::quantum: break;
    }
    return pc.quantum(n, xi);
}

double third_coefficient(const PulseCoefficients& pc, int n, DetectionMode mode)
{
    return mode == DetectionMode::neutral ? pc.mask(n) : pc.inverse(n);
}

complex grating_phase(int l, double shift, double d)
{
    return std::polar(1.0, 2.0 * pi * l * shift / d);
}

// Keeps l up to the last component above tolerance; a component still
// above tolerance at the cap means the series did not converge.
FourierSeries finish_series(std::vector<complex> plus, std::vector<complex> minus, double period,
                            double reference, const char* what)
{
    int last = 0;
    for (int l = 1; l < static_cast<int>(plus.size()); ++l) {
        const double mag = std::max(std::abs(plus[l]), std::abs(minus[l]));
        if (reference > 0.0 && mag > fourier_tolerance * reference) {
            last = l;
        }
    }
    if (last >= max_fourier_order) {
        std::ostringstream msg;
        msg << what << ": Fourier series not converged at |l| = " << max_fourier_order
            << " (|S_l|/|S_0| = " << std::abs(plus[max_fourier_order]) / reference << ")";
        throw PrecisionError(msg.str());
    }
    FourierSeries out;
    out.period = period;
    out.coefficients.resize(2 * static_cast<std::size_t>(last) + 1);
    for (int l = 0; l <= last; ++l) {
        out.coefficients[last + l] = plus[l];
        out.coefficients[last - l] = minus[l];
    }
    return out;
}

}  // namespace

const char* to_string(Model m)
{
    switch (m) {
        case Model::classical: return "classical";
        case Model::decohered: return "decohered";
        case Model::quantum: break;
    }
    return "quantum";
}

const char* to_string(DetectionMode m) { return m == DetectionMode::neutral ? "neutral" : "inverse"; }

void PulseSequence::validate() const
{
    if (!(T > 0.0)) {
        throw DomainError("pulse sequence: T must be positive");
    }
    if (N < 1) {
        throw DomainError("pulse sequence: N must be at least 1");
    }
    if (!(std::abs(tau) < T)) {
        throw DomainError("pulse sequence: |tau| must be smaller than T");
    }
    if (!(d > 0.0)) {
        throw DomainError("pulse sequence: grating period must be positive");
    }
    if (!std::isfinite(acceleration)) {
        throw DomainError("pulse sequence: acceleration must be finite");
    }
}

void EnsembleModel::validate(double d) const
{
    if (!(mass > 0.0)) {
        throw DomainError("ensemble: mass must be positive");
    }
    if (!(velocity_spread > 0.0)) {
        throw DomainError("ensemble: velocity spread must be positive");
    }
    if (!(cloud_extension >= 100.0 * d)) {
        throw DomainError("ensemble: cloud extension must be at least 100 grating periods");
    }
    if (cloud_extension < 1000.0 * d) {
        static std::atomic<bool> warned{false};
        if (!warned.exchange(true)) {
            std::clog << "warning: cloud extension below 1000 grating periods; "
                         "the uniform-cloud approximation is marginal\n";
        }
    }
}

complex FourierSeries::operator[](int l) const
{
    const int L = order();
    if (std::abs(l) > L) {
        return {};
    }
    return coefficients[static_cast<std::size_t>(l + L)];
}

complex FourierSeries::value(double x) const
{
    const int L = order();
    complex sum{};
    for (int l = -L; l <= L; ++l) {
        sum += coefficients[static_cast<std::size_t>(l + L)] * std::polar(1.0, 2.0 * pi * l * x / period);
    }
    return sum;
}

double talbot_time(double mass, double d) { return mass * d * d / constants::planck; }

double coherence_ft(const EnsembleModel& ensemble, double s)
{
    if (ensemble.coherence) {
        return ensemble.coherence(s);
    }
    const double k = s * ensemble.mass * ensemble.velocity_spread / constants::hbar;
    return std::exp(-0.5 * k * k);
}

double fringe_shift(double acceleration, int N, double T) { return -0.5 * acceleration * N * (N + 1) * T * T; }

FourierSeries density_resonant_components(const PulseSequence& seq, const EnsembleModel& ensemble,
                                          const grating::GratingPulse& first,
                                          const grating::GratingPulse& second, Model model)
{
    seq.validate();
    ensemble.validate(seq.d);
    const PulseCoefficients g1(first);
    const PulseCoefficients g2(second);
    const double tt = talbot_time(ensemble.mass, seq.d);
    const double shift = fringe_shift(seq.acceleration, seq.N, seq.T);
    const int N = seq.N;

    const auto component = [&](int l) -> complex {
        const double envelope = coherence_ft(ensemble, l * seq.d * seq.tau / tt);
        if (envelope == 0.0) {
            return {};
        }
        return envelope * coefficient(g1, -N * l, l * seq.tau / tt, model)
               * coefficient(g2, (N + 1) * l, l * seq.second_interval() / tt, model)
               * grating_phase(l, shift, seq.d);
    };

    std::vector<complex> plus(max_fourier_order + 1);
    std::vector<complex> minus(max_fourier_order + 1);
    plus[0] = minus[0] = component(0);
    for (int l = 1; l <= max_fourier_order; ++l) {
        plus[l] = component(l);
        minus[l] = component(-l);
    }
    const double reference = std::max(std::abs(plus[0]), g1.bound() * g2.bound());
    return finish_series(std::move(plus), std::move(minus), seq.d, reference, "density_resonant");
}

std::vector<double> density_resonant(const PulseSequence& seq, const EnsembleModel& ensemble,
                                     const grating::GratingPulse& first, const grating::GratingPulse& second,
                                     std::span<const double> x_grid, Model model)
{
    const auto series = density_resonant_components(seq, ensemble, first, second, model);
    std::vector<double> out;
    out.reserve(x_grid.size());
    for (double x : x_grid) {
        out.push_back(series.value(x).real());
    }
    return out;
}

FourierSeries density_general_components(double T1, double T2, double d, const EnsembleModel& ensemble,
                                         const grating::GratingPulse& first,
                                         const grating::GratingPulse& second, Model model)
{
    if (!(T1 > 0.0) || !(T2 > 0.0) || !(d > 0.0)) {
        throw DomainError("density_general: T1, T2 and d must be positive");
    }
    ensemble.validate(d);
    const PulseCoefficients g1(first);
    const PulseCoefficients g2(second);
    const double tt = talbot_time(ensemble.mass, d);
    // Width in n of the second-pulse coefficient B_{l-n}; the classical and
    // decohered kernels are wider than the bare b_j convolution.
    const int reach = 2 * g2.truncation() + (model == Model::quantum ? 0 : 48);

    const auto component = [&](int l) -> complex {
        complex sum{};
        for (int n = l - reach; n <= l + reach; ++n) {
            const double delay = n * T1 + l * T2;
            const double envelope = coherence_ft(ensemble, d * delay / tt);
            if (envelope < 1e-300) {
                continue;
            }
            sum += envelope * coefficient(g1, n, delay / tt, model) * coefficient(g2, l - n, l * T2 / tt, model);
        }
        return sum;
    };

    std::vector<complex> plus(max_fourier_order + 1);
    std::vector<complex> minus(max_fourier_order + 1);
    plus[0] = minus[0] = component(0);
    for (int l = 1; l <= max_fourier_order; ++l) {
        plus[l] = component(l);
        minus[l] = component(-l);
    }
    const double reference = std::max(std::abs(plus[0]), g1.bound() * g2.bound());
    return finish_series(std::move(plus), std::move(minus), d, reference, "density_general");
}

std::vector<double> density_general(double T1, double T2, double d, const EnsembleModel& ensemble,
                                    const grating::GratingPulse& first, const grating::GratingPulse& second,
                                    std::span<const double> x_grid, Model model)
{
    const auto series = density_general_components(T1, T2, d, ensemble, first, second, model);
    std::vector<double> out;
    out.reserve(x_grid.size());
    for (double x : x_grid) {
        out.push_back(series.value(x).real());
    }
    return out;
}

FringeResult fringe(const Setup& setup, int grid_size)
{
    const auto& seq = setup.sequence;
    seq.validate();
    setup.ensemble.validate(seq.d);
    const PulseCoefficients g1(setup.pulses[0]);
    const PulseCoefficients g2(setup.pulses[1]);
    const PulseCoefficients g3(setup.pulses[2]);
    const double tt = talbot_time(setup.ensemble.mass, seq.d);
    const double shift = fringe_shift(seq.acceleration, seq.N, seq.T);
    const int N = seq.N;
    const double pair_bound = g1.bound() * g2.bound();

    const auto component = [&](int l, double reference) -> complex {
        const double envelope = coherence_ft(setup.ensemble, l * seq.d * seq.tau / tt);
        const double third = third_coefficient(g3, -l, setup.third_mode);
        // |B_n(xi)| <= B_0(0): skip terms that cannot reach the tolerance.
        if (envelope * pair_bound * std::abs(third) <= 1e-3 * fourier_tolerance * reference) {
            return {};
        }
        return envelope * coefficient(g1, -N * l, l * seq.tau / tt, setup.model)
               * coefficient(g2, (N + 1) * l, l * seq.second_interval() / tt, setup.model) * third
               * grating_phase(-l, shift, seq.d);
    };

    std::vector<complex> plus(max_fourier_order + 1);
    std::vector<complex> minus(max_fourier_order + 1);
    plus[0] = minus[0] = component(0, 0.0);
    const double reference = std::abs(plus[0]) > 0.0 ? std::abs(plus[0]) : pair_bound;
    for (int l = 1; l <= max_fourier_order; ++l) {
        plus[l] = component(l, reference);
        minus[l] = component(-l, reference);
    }

    FringeResult result;
    result.signal = finish_series(std::move(plus), std::move(minus), seq.d, reference, "signal");
    result.S0 = result.signal[0].real();
    result.shift = shift;
    result.V = visibility_full(result.signal, grid_size);
    result.V_sin = result.S0 > 0.0 ? visibility_sin(result.signal) : 0.0;
    return result;
}

double signal(const Setup& setup, double x_S) { return fringe(setup).signal.value(x_S).real(); }

double visibility_sin(const FourierSeries& s)
{
    const double s0 = s[0].real();
    if (!(s0 > 0.0)) {
        throw DegenerateSignalError("sinusoidal visibility undefined: mean signal S_0 is zero");
    }
    return 2.0 * std::abs(s[1]) / s0;
}

double visibility_full(const FourierSeries& s, int grid_size)
{
    if (grid_size < 256) {
        throw DomainError("visibility_full: grid_size must be at least 256");
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int i = 0; i < grid_size; ++i) {
        const double v = s.value(s.period * i / grid_size).real();
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(hi + lo > 0.0)) {
        return 0.0;
    }
    return std::clamp((hi - lo) / (hi + lo), 0.0, 1.0);
}

double visibility_sin(const Setup& setup) { return visibility_sin(fringe(setup).signal); }

double visibility_full(const Setup& setup, int grid_size) { return fringe(setup, grid_size).V; }

}  // namespace otima::interferometer
