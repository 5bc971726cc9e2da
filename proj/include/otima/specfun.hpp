#pragma once

#include <complex>
#include <vector>

// Integer-order Bessel functions for the grating coefficients.
//
// All evaluations go through one backward (Miller) recurrence for I_k(z)
// normalized with the generating-function sum
//     e^z = I_0(z) + 2 sum_{k>=1} I_k(z),
// which covers real J_k via J_k(x) = i^-k I_k(ix). Results are returned
// exponentially scaled where that keeps them in range.
namespace otima::specfun {

using complex = std::complex<double>;

/// Domain of the point evaluators: |order| <= 200, |argument| <= 500.
inline constexpr int max_order = 200;
inline constexpr double max_argument = 500.0;

/// Sequence evaluators accept larger arguments; cost grows linearly.
inline constexpr double max_sequence_argument = 1e5;

/// J_order(x). Throws DomainError outside the documented domain.
double bessel_j(int order, double x);

/// I_order(z) for complex z. Throws DomainError outside the domain.
complex bessel_i(int order, complex z);

/// exp(-|Re z|) I_order(z); bounded by 1 in magnitude.
complex bessel_ive(int order, complex z);

/// exp(-|Re z|) I_k(z) for k = 0..K, where K >= min_order and all orders
/// above K are negligible (below ~1e-17 of the largest term, or underflow).
std::vector<complex> bessel_ive_sequence(complex z, int min_order = 0);

/// J_k(x) for k = 0..K with the same truncation rule.
std::vector<double> bessel_j_sequence(double x, int min_order = 0);

/// Below this |x| the j1(x)/x evaluator switches to its Taylor series.
inline constexpr double spherical_series_threshold = 0.05;

/// j0(x) = sin(x)/x, with j0(0) = 1.
double spherical_j0(double x);

/// j1(x)/x = (sin x - x cos x)/x^3, with limit 1/3 at x = 0.
double spherical_j1_over_x(double x);

}  // namespace otima::specfun
