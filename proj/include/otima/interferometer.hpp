#pragma once

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "otima/grating.hpp"

namespace otima::interferometer {

using complex = std::complex<double>;

/// Pulse timing: G1 at t = 0, G2 at T, G3 at (N+1) T + tau.
struct PulseSequence {
    double T = 0.0;             // s, first pulse separation
    int N = 1;                  // second separation is N T + tau
    double tau = 0.0;           // s
    double acceleration = 0.0;  // m/s^2 along the grating vector
    double d = 78.815e-9;       // m, grating period

    void validate() const;
    double second_interval() const { return N * T + tau; }
};

/// Incoherent particle cloud, broad in momentum and position.
struct EnsembleModel {
    double mass = 0.0;              // kg
    double velocity_spread = 1.0;   // m/s, rms of the transverse velocity
    double cloud_extension = 1e-3;  // m; display only, densities are per-period normalized
    /// Optional replacement for the Gaussian coherence function D~(s).
    std::function<double(double)> coherence;

    void validate(double d) const;
};

enum class Model { quantum, classical, decohered };
enum class DetectionMode { neutral, inverse };

const char* to_string(Model m);
const char* to_string(DetectionMode m);

struct Setup {
    PulseSequence sequence;
    EnsembleModel ensemble;
    std::array<grating::GratingPulse, 3> pulses{};
    Model model = Model::quantum;
    DetectionMode third_mode = DetectionMode::neutral;
};

/// Fourier series over one grating period, index l = -L..L.
struct FourierSeries {
    double period = 1.0;
    std::vector<complex> coefficients;  // coefficients[l + L]

    int order() const { return static_cast<int>(coefficients.size() / 2); }
    complex operator[](int l) const;
    complex value(double x) const;
};

struct FringeResult {
    FourierSeries signal;  // S_l
    double S0 = 0.0;
    double V = 0.0;
    double V_sin = 0.0;
    double shift = 0.0;  // m, fringe displacement delta x
};

/// Fourier truncation: keep |S_l| / |S_0| above this, up to |l| = max_order.
inline constexpr double fourier_tolerance = 1e-14;
inline constexpr int max_fourier_order = 64;
inline constexpr int default_visibility_grid = 512;

double talbot_time(double mass, double d);

/// D~(s); Gaussian exp(-(s m dv)^2 / 2 hbar^2) unless overridden.
double coherence_ft(const EnsembleModel& ensemble, double s);

/// delta x = -(a/2) N (N+1) T^2
double fringe_shift(double acceleration, int N, double T);

/// Fourier components of the density right before the third pulse
/// (resonance approximation), including the acceleration shift.
FourierSeries density_resonant_components(const PulseSequence& seq, const EnsembleModel& ensemble,
                                          const grating::GratingPulse& first,
                                          const grating::GratingPulse& second, Model model = Model::quantum);
std::vector<double> density_resonant(const PulseSequence& seq, const EnsembleModel& ensemble,
                                     const grating::GratingPulse& first, const grating::GratingPulse& second,
                                     std::span<const double> x_grid, Model model = Model::quantum);

/// Full double sum over (n, l) without the resonance approximation.
FourierSeries density_general_components(double T1, double T2, double d, const EnsembleModel& ensemble,
                                         const grating::GratingPulse& first,
                                         const grating::GratingPulse& second, Model model = Model::quantum);
std::vector<double> density_general(double T1, double T2, double d, const EnsembleModel& ensemble,
                                    const grating::GratingPulse& first, const grating::GratingPulse& second,
                                    std::span<const double> x_grid, Model model = Model::quantum);

/// Detection signal S_l, S_0, V, V_sin for the three-pulse sequence.
/// x_S is the offset of the third pulse; S(x_S) = sum_l S_l e^{2 pi i l (x_S - dx)/d}.
FringeResult fringe(const Setup& setup, int grid_size = default_visibility_grid);

double signal(const Setup& setup, double x_S);
/// 2|S_1|/S_0. Throws DegenerateSignalError when S_0 = 0.
double visibility_sin(const Setup& setup);
/// (S_max - S_min)/(S_max + S_min) from grid_size samples over a period.
double visibility_full(const Setup& setup, int grid_size = default_visibility_grid);

/// Visibility helpers on already computed components.
double visibility_sin(const FourierSeries& s);
double visibility_full(const FourierSeries& s, int grid_size);

}  // namespace otima::interferometer
