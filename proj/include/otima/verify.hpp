#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "otima/grating.hpp"

// Self-certification: every closed form against its brute-force oracle.
namespace otima::verify {

using complex = std::complex<double>;

enum class Level { fast, full };
enum class Status { pass, mismatch, precision };

struct Check {
    std::string name;    // closed form and its arguments
    complex closed;      // library value
    complex oracle;      // brute-force value
    double deviation = 0.0;
    double tolerance = 0.0;
    Status status = Status::pass;
    std::string note;
};

struct Report {
    std::vector<Check> checks;

    bool ok() const;
    /// 0 all passed, 4 any mismatch, 3 oracle failure without mismatch.
    int exit_code() const;
    std::string text() const;
};

/// Implementations under test. Replacing one of them (for instance with a
/// deliberately perturbed Bessel function) must make the suite fail.
struct Evaluators {
    std::function<double(int, double)> bessel_j;
    std::function<complex(int, complex)> bessel_i;
    std::function<complex(int, const grating::GratingPulse&)> fourier_b;
    std::function<complex(int, double, const grating::GratingPulse&)> tl_quantum;
    std::function<complex(int, double, const grating::GratingPulse&)> tl_classical;
    std::function<double(int, double, double)> rayleigh_R;
    std::function<complex(int, double, const grating::GratingPulse&)> tl_decohered;

    /// The library implementations.
    static Evaluators library();
};

/// Fast: Bessel series, b/B/R quadratures, closed-form branches.
/// Full: adds the classical Monte-Carlo comparison.
Report run(Level level, const Evaluators& impl = Evaluators::library(), std::uint64_t seed = 1);

}  // namespace otima::verify
