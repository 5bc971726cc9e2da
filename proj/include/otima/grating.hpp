#pragma once

#include <complex>
#include <vector>

// A single standing-wave laser pulse acting on the cluster beam.
//
// Sign convention: phi0 > 0 describes high-field-seeking particles
// (positive polarizability, beta > 0); they are pulled toward the
// antinodes. Coefficients B_n(xi) are the Fourier components
//     B_n(xi) = (1/d) int dx e^{-2 pi i n x/d} t(x - xi d/2) t*(x + xi d/2).
namespace otima::grating {

using complex = std::complex<double>;

struct GratingPulse {
    double n0 = 0.0;    // mean absorbed photons at the antinodes
    double phi0 = 0.0;  // peak phase shift
    double nR = 0.0;    // mean Rayleigh-scattered photons at the antinodes

    /// phi0 = n0 / (2 beta); nR = n0 * sigma_R / sigma_abs.
    static GratingPulse from_beta(double n0, double beta, double rayleigh_ratio = 0.0);
    void validate() const;
};

/// Complex transmission t(x) = exp[(-n0/2 + i phi0) cos^2(pi x/d)].
complex transmission(double x, double d, const GratingPulse& pulse);

/// Fourier coefficient b_n of t(x).
complex fourier_b(int n, const GratingPulse& pulse);

/// Quantum Talbot-Lau coefficient from the convolution of the b_n.
complex tl_quantum(int n, double xi, const GratingPulse& pulse);

/// Real mask coefficient e^{-n0/2} I_n(-n0/2) = B_n(0).
double tl_mask(int n, double n0);

/// Mask coefficients of the ion-counting (inverted) third pulse.
double inverse_mask(int n, double n0);

/// Classical analog: same kernel with zeta_ion = n0/2, zeta_coh = pi xi phi0.
complex tl_classical(int n, double xi, const GratingPulse& pulse);

/// Fourier coefficient of the Rayleigh-scattering decoherence kernel.
double rayleigh_R(int n, double xi, double nR);

/// Talbot-Lau coefficient including Rayleigh decoherence.
complex tl_decohered(int n, double xi, const GratingPulse& pulse);

/// Quantum zeta parameters at shear xi.
struct Zeta {
    double ion = 0.0;
    double coh = 0.0;
};
Zeta quantum_zeta(double xi, const GratingPulse& pulse);
Zeta classical_zeta(double xi, const GratingPulse& pulse);

/// Closed Bessel-J form of the Talbot-Lau coefficient,
///   e^{-n0/2} [(zc - zi)/(zc + zi)]^{n/2} J_n(sgn(zc + zi) sqrt(zc^2 - zi^2)),
/// continued to zc^2 < zi^2 through J_n(iy) = i^n I_n(y). Undefined on
/// zc + zi = 0 (throws DomainError). Kept as an independent cross-check.
complex tl_closed_form(int n, Zeta zeta, double n0);

/// Per-pulse cache: the b_n are computed once and every coefficient
/// evaluator reuses them.
class PulseCoefficients {
public:
    explicit PulseCoefficients(const GratingPulse& pulse);

    const GratingPulse& pulse() const { return pulse_; }
    /// Largest |j| kept in the b_j series.
    int truncation() const { return truncation_; }
    complex b(int n) const;
    double mask(int n) const;
    double inverse(int n) const { return (n == 0 ? 1.0 : 0.0) - mask(n); }

    complex quantum(int n, double xi) const;
    complex classical(int n, double xi) const;
    complex decohered(int n, double xi) const;

    /// Upper bound on |B_n(xi)| for every n and xi: the mean transmission.
    double bound() const { return mask(0); }

private:
    GratingPulse pulse_;
    int truncation_ = 0;
    std::vector<complex> b_;      // b_0 .. b_J (b_{-n} = b_n)
    std::vector<double> mask_;    // B_0(0) .. B_M(0)
};

/// R_k(xi) for k = 0..K (R_{-k} = R_k), tail truncated.
std::vector<double> rayleigh_sequence(double xi, double nR);

}  // namespace otima::grating
