#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace otima::materials {

/// Bulk optical and mechanical data of a cluster material, taken at the
/// grating wavelength.
struct MaterialRecord {
    std::string name;
    double mass_density = 0.0;  // kg/m^3
    double epsilon1 = 1.0;
    double epsilon2 = 0.0;
    std::optional<double> work_function_ev;

    /// Throws SingularityError / DomainError when an invariant is violated.
    void validate() const;
};

struct GaussianProfile {
    double waist_y = 0.0;  // m
    double waist_z = 0.0;  // m
};

struct FlatTopProfile {
    double area = 0.0;  // m^2
};

using BeamProfile = std::variant<GaussianProfile, FlatTopProfile>;

struct LaserPulse {
    double wavelength = 157.63e-9;  // m
    double pulse_energy = 0.0;      // J
    BeamProfile profile = FlatTopProfile{1e-6};

    void validate() const;
    /// Standing-wave period, half the laser wavelength.
    double grating_period() const { return 0.5 * wavelength; }
    /// Normalized transverse profile at the beam centre, f(0,0), in 1/m^2.
    double peak_profile() const;
};

struct ParticleSpecies {
    MaterialRecord material;
    double mass = 0.0;  // kg

    static ParticleSpecies from_amu(MaterialRecord material, double mass_amu);
    void validate() const;
    /// Radius of a homogeneous sphere of the given mass and density.
    double radius() const;
};

// Absorption cross section, m^2. Mass/density form.
double absorption_cross_section(const ParticleSpecies& species, double wavelength);
// Same quantity written with the radius and Im[(eps-1)/(eps+2)].
double absorption_cross_section_from_radius(const ParticleSpecies& species, double wavelength);

// Optical polarizability in volume units (alpha_SI / 4 pi eps0), m^3.
double polarizability(const ParticleSpecies& species);
double polarizability_from_radius(const ParticleSpecies& species);

/// Ratio of absorbed photons to twice the peak phase, n0 / (2 phi0).
/// Negative for low-field seekers.
double beta(const MaterialRecord& material);

/// sigma_Rayleigh / sigma_abs, mass/density form. Throws SingularityError
/// for a lossless material.
double rayleigh_ratio(const ParticleSpecies& species, double wavelength);
/// (2/9) ((eps1-1)^2+eps2^2)/eps2 (k R)^3.
double rayleigh_ratio_from_radius(const ParticleSpecies& species, double wavelength);

/// Mean number of absorbed photons at the antinodes of one pulse.
double n0_from_pulse(const LaserPulse& pulse, double absorption_cross_section);
/// Pulse energy (J) that yields the requested n0.
double pulse_energy_for_n0(const LaserPulse& pulse, double absorption_cross_section, double n0);

/// Cluster ionization energy in eV from the bulk work function (eV) and
/// the cluster radius (m).
double ionization_energy(double work_function_ev, double radius);

/// de Broglie wavelength h/(m v) in m.
double de_broglie(double mass, double velocity);

/// Parse a material database. See data/materials.txt for the grammar.
std::vector<MaterialRecord> load_materials(const std::filesystem::path& path);
std::vector<MaterialRecord> parse_materials(const std::string& text, const std::string& source_name);

/// Lookup by name; throws ConfigError when absent.
const MaterialRecord& find_material(const std::vector<MaterialRecord>& records, const std::string& name);

}  // namespace otima::materials
