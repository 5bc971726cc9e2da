#include "otima/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "otima/error.hpp"

namespace otima::specfun {

namespace {

constexpr double rescale_threshold = 1e200;
constexpr double rescale_factor = 1e-200;

void check_point_domain(int order, double magnitude, const char* name)
{
    if (std::abs(order) > max_order || !(magnitude <= max_argument)) {
        std::ostringstream msg;
        msg << name << ": order " << order << " / |argument| " << magnitude
            << " outside |order| <= " << max_order << ", |argument| <= " << max_argument;
        throw DomainError(msg.str());
    }
}

// Starting index of the backward recurrence. For k beyond max(n, |z|) the
// terms fall off faster than geometrically; the sqrt margin covers the
// transition region around k ~ |z|.
int recurrence_start(double magnitude, int min_order)
{
    const double top = std::max(static_cast<double>(min_order), magnitude);
    return static_cast<int>(top + 30.0 + 12.0 * std::sqrt(top));
}

// exp(-w) I_k(w) for Re w >= 0, k = 0..start.
std::vector<complex> miller_scaled(complex w, int start)
{
    std::vector<complex> u(static_cast<std::size_t>(start) + 2, complex{});
    u[start + 1] = 0.0;
    u[start] = 1e-30;
    const complex two_over_w = 2.0 / w;
    for (int k = start; k >= 1; --k) {
        u[k - 1] = static_cast<double>(k) * two_over_w * u[k] + u[k + 1];
        if (std::abs(u[k - 1]) > rescale_threshold) {
            for (int j = k - 1; j <= start; ++j) {
                u[j] *= rescale_factor;
            }
        }
    }
    complex sum = u[0];
    for (int k = 1; k <= start; ++k) {
        sum += 2.0 * u[k];
    }
    u.pop_back();
    for (auto& v : u) {
        v /= sum;
    }
    return u;
}

}  // namespace

std::vector<complex> bessel_ive_sequence(complex z, int min_order)
{
    min_order = std::max(min_order, 0);
    const double magnitude = std::abs(z);
    if (!std::isfinite(magnitude) || magnitude > max_sequence_argument) {
        throw DomainError("bessel_ive_sequence: argument magnitude out of range");
    }
    if (magnitude == 0.0) {
        std::vector<complex> out(static_cast<std::size_t>(min_order) + 1, complex{});
        out[0] = 1.0;
        return out;
    }

    // I_k(-w) = (-1)^k I_k(w): recur on the right half-plane only.
    const bool reflect = z.real() < 0.0;
    const complex w = reflect ? -z : z;
    const int start = recurrence_start(magnitude, min_order);
    std::vector<complex> seq = miller_scaled(w, start);

    // exp(-|Re z|) I_k(z) = exp(i Im w) * [exp(-w) I_k(w)] * (-1)^k
    const complex phase = std::polar(1.0, w.imag());
    double largest = 0.0;
    for (int k = 0; k <= start; ++k) {
        seq[k] *= phase;
        if (reflect && (k % 2 == 1)) {
            seq[k] = -seq[k];
        }
        largest = std::max(largest, std::abs(seq[k]));
    }

    int last = start;
    while (last > min_order && std::abs(seq[last]) <= 1e-17 * largest) {
        --last;
    }
    seq.resize(static_cast<std::size_t>(last) + 1);
    return seq;
}

std::vector<double> bessel_j_sequence(double x, int min_order)
{
    const auto seq = bessel_ive_sequence(complex{0.0, x}, min_order);
    std::vector<double> out(seq.size());
    // J_k(x) = i^-k I_k(ix); Re(ix) = 0 so the scaling is trivial.
    for (std::size_t k = 0; k < seq.size(); ++k) {
        switch (k % 4) {
            case 0: out[k] = seq[k].real(); break;
            case 1: out[k] = seq[k].imag(); break;
            case 2: out[k] = -seq[k].real(); break;
            default: out[k] = -seq[k].imag(); break;
        }
    }
    return out;
}

complex bessel_ive(int order, complex z)
{
    check_point_domain(order, std::abs(z), "bessel_ive");
    const int n = std::abs(order);
    const auto seq = bessel_ive_sequence(z, n);
    return seq[n];
}

complex bessel_i(int order, complex z)
{
    check_point_domain(order, std::abs(z), "bessel_i");
    const complex scaled = bessel_ive(order, z);
    if (z.imag() == 0.0) {
        return {scaled.real() * std::exp(std::abs(z.real())), 0.0};
    }
    return scaled * std::exp(std::abs(z.real()));
}

double bessel_j(int order, double x)
{
    check_point_domain(order, std::abs(x), "bessel_j");
    const int n = std::abs(order);
    const auto seq = bessel_j_sequence(x, n);
    const double value = seq[n];
    return (order < 0 && (n % 2 == 1)) ? -value : value;
}

double spherical_j0(double x)
{
    if (x == 0.0) {
        return 1.0;
    }
    return std::sin(x) / x;
}

double spherical_j1_over_x(double x)
{
    const double ax = std::abs(x);
    if (ax < spherical_series_threshold) {
        const double x2 = x * x;
        return 1.0 / 3.0 - x2 / 30.0 + x2 * x2 / 840.0 - x2 * x2 * x2 / 45360.0;
    }
    return (std::sin(x) - x * std::cos(x)) / (x * x * x);
}

}  // namespace otima::specfun
