#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "otima/grating.hpp"
#include "otima/interferometer.hpp"

// Brute-force validators for the closed-form expressions. None of these
// routines calls the Bessel machinery in specfun: they integrate the
// transmission function directly, sum power series in extended precision,
// or follow classical trajectories.
namespace otima::oracle {

using complex = std::complex<double>;

enum class Scheme { trapezoid_periodic, gauss_legendre };

struct QuadratureSpec {
    int count = 64;                       // initial abscissa count
    Scheme scheme = Scheme::trapezoid_periodic;
    double tolerance = 1e-13;             // agreement between refinement levels
    int max_count = 1 << 16;

    void validate() const;
};

// ---- Power series in extended precision ------------------------------------

/// J_n(x) = sum_k (-1)^k (x/2)^{2k+n} / (k! (n+k)!), summed with 300 digits.
double bessel_j_series(int n, double x);
/// I_n(z) = sum_k (z/2)^{2k+n} / (k! (n+k)!), summed with 300 digits.
complex bessel_i_series(int n, complex z);

// ---- Quadrature -------------------------------------------------------------

struct QuadratureResult {
    complex value;
    int count = 0;        // abscissae used at the accepted level
    double change = 0.0;  // |I_M - I_{M/2}| at acceptance
};

/// (1/d) int_0^d f(x) dx for a d-periodic f (unit period used internally).
/// Refines by doubling until two levels agree; throws PrecisionError otherwise.
template <typename F>
QuadratureResult periodic_mean(F&& f, const QuadratureSpec& spec);

/// Fourier coefficient of t(x) by the periodic trapezoid rule.
QuadratureResult b_by_quadrature(int n, const grating::GratingPulse& pulse, const QuadratureSpec& spec = {});

/// Fourier coefficient of the two-point kernel t(x - xi d/2) t*(x + xi d/2).
QuadratureResult B_by_kernel_quadrature(int n, double xi, const grating::GratingPulse& pulse,
                                        const QuadratureSpec& spec = {});

/// Same kernel with the classical small-shear phase |t(x)|^2 exp(-i xi d dphi/dx).
QuadratureResult B_classical_by_quadrature(int n, double xi, const grating::GratingPulse& pulse,
                                           const QuadratureSpec& spec = {});

// ---- Sphere quadrature for Rayleigh decoherence -----------------------------

struct SphereSpec {
    int polar = 64;    // Gauss-Legendre nodes in cos(theta)
    int azimuth = 64;  // uniform nodes in phi
};

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// int dOmega (3 sin^2 theta / 8 pi) exp(i y u_x), theta measured from the
/// laser polarization (perpendicular to x).
complex dipole_average(double y, const SphereSpec& sphere = {});

/// eta(x - s/2, x + s/2) from the direct sphere integral, with x, s in units of d.
complex decoherence_function(double x, double s, double nR, const SphereSpec& sphere = {});

/// R_n(xi) as the Fourier coefficient in x of eta(x - xi d/2, x + xi d/2).
/// Throws PrecisionError when 64x64 and 128x128 sphere grids disagree.
QuadratureResult R_by_sphere_quadrature(int n, double xi, double nR, const SphereSpec& sphere = {},
                                        const QuadratureSpec& spec = {});

/// Decohered coefficient as the Fourier coefficient of the coherent kernel
/// times the sphere-integrated decoherence function.
QuadratureResult B_decohered_by_quadrature(int n, double xi, const grating::GratingPulse& pulse,
                                           const SphereSpec& sphere = {}, const QuadratureSpec& spec = {});

// ---- Classical Monte Carlo --------------------------------------------------

struct McResult {
    interferometer::FringeResult fringe;  // S_l for |l| <= 2, S0, V_sin
    complex S1_error;                     // standard errors (re, im) of S_1
    double S0_error = 0.0;
    double V_sin_error = 0.0;
    long long samples = 0;
    bool inconclusive = false;  // statistical error too large to test anything
};

inline constexpr long long min_mc_samples = 100000;
inline constexpr long long mc_chunk = 1 << 14;

/// Classical trajectories through the three pulses: uniform start over a
/// period, Gaussian momentum, survival weights e^{-n(x)}, dipole kicks
/// hbar dphi/dx, free fall between pulses. Deterministic in (seed, samples)
/// regardless of thread count.
McResult classical_mc(const interferometer::Setup& setup, long long samples, std::uint64_t seed,
                      unsigned threads = 0);

}  // namespace otima::oracle

#include "otima/oracle_impl.hpp"
