#include "otima/materials.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "otima/constants.hpp"
#include "otima/error.hpp"

namespace otima::materials {

namespace {

using constants::pi;

constexpr double pole_tolerance = 1e-12;

// |eps + 2|^2
double pole_distance_sq(const MaterialRecord& m)
{
    const double a = m.epsilon1 + 2.0;
    return a * a + m.epsilon2 * m.epsilon2;
}

void check_pole(const MaterialRecord& m)
{
    if (pole_distance_sq(m) < pole_tolerance) {
        throw SingularityError("material '" + m.name + "': dielectric function at the eps = -2 pole");
    }
}

std::complex<double> clausius_mossotti(const MaterialRecord& m)
{
    check_pole(m);
    const std::complex<double> eps{m.epsilon1, m.epsilon2};
    return (eps - 1.0) / (eps + 2.0);
}

}  // namespace

void MaterialRecord::validate() const
{
    if (name.empty()) {
        throw DomainError("material record without a name");
    }
    if (!(mass_density > 0.0) || !std::isfinite(mass_density)) {
        throw DomainError("material '" + name + "': density_kg_m3 must be positive");
    }
    if (!std::isfinite(epsilon1) || !std::isfinite(epsilon2)) {
        throw DomainError("material '" + name + "': dielectric function must be finite");
    }
    if (epsilon2 < 0.0) {
        throw DomainError("material '" + name + "': eps2 must be non-negative");
    }
    if (work_function_ev && !(*work_function_ev > 0.0)) {
        throw DomainError("material '" + name + "': work_function_ev must be positive");
    }
    check_pole(*this);
}

void LaserPulse::validate() const
{
    if (!(wavelength > 0.0)) {
        throw DomainError("laser wavelength must be positive");
    }
    if (!(pulse_energy >= 0.0)) {
        throw DomainError("pulse energy must be non-negative");
    }
    if (const auto* g = std::get_if<GaussianProfile>(&profile)) {
        if (!(g->waist_y > 0.0) || !(g->waist_z > 0.0)) {
            throw DomainError("Gaussian beam waists must be positive");
        }
    } else if (!(std::get<FlatTopProfile>(profile).area > 0.0)) {
        throw DomainError("flat-top beam area must be positive");
    }
}

double LaserPulse::peak_profile() const
{
    if (const auto* g = std::get_if<GaussianProfile>(&profile)) {
        return 2.0 / (pi * g->waist_y * g->waist_z);
    }
    return 1.0 / std::get<FlatTopProfile>(profile).area;
}

ParticleSpecies ParticleSpecies::from_amu(MaterialRecord material, double mass_amu)
{
    return {std::move(material), mass_amu * constants::atomic_mass_unit};
}

void ParticleSpecies::validate() const
{
    material.validate();
    if (!(mass > 0.0)) {
        throw DomainError("particle mass must be positive");
    }
}

double ParticleSpecies::radius() const
{
    return std::cbrt(3.0 * mass / (4.0 * pi * material.mass_density));
}

double absorption_cross_section(const ParticleSpecies& s, double wavelength)
{
    const auto& m = s.material;
    check_pole(m);
    return 18.0 * pi * s.mass / (m.mass_density * wavelength) * m.epsilon2 / pole_distance_sq(m);
}

double absorption_cross_section_from_radius(const ParticleSpecies& s, double wavelength)
{
    const double r = s.radius();
    return 4.0 * pi * r * r * r * (2.0 * pi / wavelength) * clausius_mossotti(s.material).imag();
}

double polarizability(const ParticleSpecies& s)
{
    const auto& m = s.material;
    check_pole(m);
    const double numerator = m.epsilon1 * m.epsilon1 + m.epsilon2 * m.epsilon2 + m.epsilon1 - 2.0;
    return 3.0 * s.mass / (4.0 * pi * m.mass_density) * numerator / pole_distance_sq(m);
}

double polarizability_from_radius(const ParticleSpecies& s)
{
    const double r = s.radius();
    return r * r * r * clausius_mossotti(s.material).real();
}

double beta(const MaterialRecord& m)
{
    const double denominator = m.epsilon1 * m.epsilon1 + m.epsilon2 * m.epsilon2 + m.epsilon1 - 2.0;
    if (denominator == 0.0) {
        throw SingularityError("material '" + m.name + "': vanishing polarizability, beta undefined");
    }
    return 3.0 * m.epsilon2 / denominator;
}

double rayleigh_ratio(const ParticleSpecies& s, double wavelength)
{
    const auto& m = s.material;
    if (!(m.epsilon2 > 0.0)) {
        throw SingularityError("material '" + m.name + "': Rayleigh/absorption ratio needs eps2 > 0");
    }
    const double e1 = m.epsilon1 - 1.0;
    const double lam3 = wavelength * wavelength * wavelength;
    return 4.0 * pi * pi / 3.0 * (e1 * e1 + m.epsilon2 * m.epsilon2) / m.epsilon2
           * s.mass / (m.mass_density * lam3);
}

double rayleigh_ratio_from_radius(const ParticleSpecies& s, double wavelength)
{
    const auto& m = s.material;
    if (!(m.epsilon2 > 0.0)) {
        throw SingularityError("material '" + m.name + "': Rayleigh/absorption ratio needs eps2 > 0");
    }
    const double kr = 2.0 * pi / wavelength * s.radius();
    const double e1 = m.epsilon1 - 1.0;
    return 2.0 / 9.0 * (e1 * e1 + m.epsilon2 * m.epsilon2) / m.epsilon2 * kr * kr * kr;
}

double n0_from_pulse(const LaserPulse& pulse, double sigma_abs)
{
    pulse.validate();
    return 4.0 * sigma_abs * pulse.pulse_energy * pulse.wavelength * pulse.peak_profile()
           / (constants::planck * constants::speed_of_light);
}

double pulse_energy_for_n0(const LaserPulse& pulse, double sigma_abs, double n0)
{
    pulse.validate();
    if (!(sigma_abs > 0.0)) {
        throw SingularityError("cannot solve for pulse energy with zero absorption cross section");
    }
    return n0 * constants::planck * constants::speed_of_light
           / (4.0 * sigma_abs * pulse.wavelength * pulse.peak_profile());
}

double ionization_energy(double work_function_ev, double radius)
{
    return work_function_ev + 0.42 * constants::coulomb_energy_length / radius / constants::electron_volt;
}

double de_broglie(double mass, double velocity)
{
    return constants::planck / (mass * velocity);
}

std::vector<MaterialRecord> parse_materials(const std::string& text, const std::string& source)
{
    static const std::set<std::string> known{"name", "density_kg_m3", "eps1", "eps2", "work_function_ev"};

    std::vector<MaterialRecord> records;
    std::map<std::string, int> seen_names;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto fail = [&](const std::string& msg) {
            throw ParseError(source + ":" + std::to_string(lineno) + ": " + msg);
        };
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream tokens(line);
        std::map<std::string, std::string> fields;
        std::string token;
        while (tokens >> token) {
            const auto eq = token.find('=');
            if (eq == std::string::npos || eq == 0 || eq + 1 == token.size()) {
                fail("expected key=value, got '" + token + "'");
            }
            std::string key = token.substr(0, eq);
            std::string value = token.substr(eq + 1);
            if (!known.contains(key)) {
                if (key.starts_with("wavelength")) {
                    fail("multi-wavelength dielectric tables are not supported; give eps1/eps2 at the grating wavelength");
                }
                fail("unknown key '" + key + "'");
            }
            if (key != "name" && value.find(',') != std::string::npos) {
                fail("key '" + key + "' has a list value; only one value per material is supported");
            }
            if (!fields.emplace(key, value).second) {
                fail("duplicate key '" + key + "'");
            }
        }
        if (fields.empty()) {
            continue;
        }
        for (const char* required : {"name", "density_kg_m3", "eps1", "eps2"}) {
            if (!fields.contains(required)) {
                fail(std::string("missing key '") + required + "'");
            }
        }
        const auto number = [&](const std::string& key) {
            const std::string& v = fields.at(key);
            std::size_t used = 0;
            double out = 0.0;
            try {
                out = std::stod(v, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != v.size() || !std::isfinite(out)) {
                fail("key '" + key + "': '" + v + "' is not a finite number");
            }
            return out;
        };
        MaterialRecord rec;
        rec.name = fields.at("name");
        rec.mass_density = number("density_kg_m3");
        rec.epsilon1 = number("eps1");
        rec.epsilon2 = number("eps2");
        if (fields.contains("work_function_ev")) {
            rec.work_function_ev = number("work_function_ev");
        }
        try {
            rec.validate();
        } catch (const std::exception& e) {
            fail(e.what());
        }
        if (const auto [it, inserted] = seen_names.emplace(rec.name, lineno); !inserted) {
            fail("duplicate material '" + rec.name + "' (first defined on line " + std::to_string(it->second) + ")");
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<MaterialRecord> load_materials(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path.string() + ": cannot open material database");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_materials(buffer.str(), path.string());
}

const MaterialRecord& find_material(const std::vector<MaterialRecord>& records, const std::string& name)
{
    for (const auto& r : records) {
        if (r.name == name) {
            return r;
        }
    }
    throw ConfigError("material '" + name + "' not found in the material database");
}

}  // namespace otima::materials
