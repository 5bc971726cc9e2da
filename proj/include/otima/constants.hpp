#pragma once

#include <numbers>

// CODATA 2018 values. Every derived quantity in the library goes through
// this table; nothing else hard-codes a physical constant.
namespace otima::constants {

inline constexpr double pi = std::numbers::pi;

inline constexpr double planck = 6.62607015e-34;            // J s (exact)
inline constexpr double hbar = planck / (2.0 * pi);         // J s
inline constexpr double speed_of_light = 299792458.0;       // m/s (exact)
inline constexpr double elementary_charge = 1.602176634e-19;  // C (exact)
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double atomic_mass_unit = 1.66053906660e-27;    // kg
inline constexpr double standard_gravity = 9.80665;         // m/s^2

// Unit conversions applied once at the external boundaries.
inline constexpr double electron_volt = elementary_charge;  // J
inline constexpr double nanometre = 1e-9;
inline constexpr double nanosecond = 1e-9;
inline constexpr double millijoule = 1e-3;
inline constexpr double millimetre = 1e-3;

/// e^2 / (4 pi eps0), in J m.
inline constexpr double coulomb_energy_length =
    elementary_charge * elementary_charge / (4.0 * pi * vacuum_permittivity);

}  // namespace otima::constants
