#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "otima/interferometer.hpp"
#include "otima/materials.hpp"

// Scan configuration files: `key = value` lines grouped in `[section]`
// blocks, `#` or `;` comments. Lists are comma separated.
namespace otima::config {

struct Entry {
    std::string value;
    int line = 0;
};

/// Raw sectioned document. Keys are stored as "section.key".
struct Document {
    std::string source;
    std::map<std::string, Entry> entries;

    bool has(const std::string& key) const { return entries.count(key) != 0; }
};

/// Throws ParseError("source:line: ...") on malformed lines and duplicates.
Document parse_document(const std::string& text, const std::string& source);

enum class Axis { delay, power2, power3, x_s, tau };

const char* to_string(Axis a);

struct BeamSpec {
    std::string profile = "gaussian";  // gaussian | flat_top
    double waist_y_um = 0.0;
    double waist_z_um = 0.0;
    double area_mm2 = 0.0;
};

struct ScanConfig {
    // [run]
    std::string name = "scan";
    Axis axis = Axis::delay;
    double start = 0.1;
    double stop = 3.0;
    int points = 0;  // 0 selects the per-axis default
    std::vector<interferometer::Model> models{interferometer::Model::quantum};
    std::vector<interferometer::DetectionMode> modes{interferometer::DetectionMode::neutral};
    std::uint64_t seed = 1;

    // [particle]
    std::string materials_file;  // empty: bundled database
    std::vector<std::string> materials{"gold"};
    std::vector<double> masses_amu{1e6};
    std::optional<double> beta;  // overrides the material value
    bool rayleigh = true;
    double velocity_spread = 1.0;    // m/s
    double cloud_extension = 1e-3;   // m
    double forward_velocity = 0.0;   // m/s, only for the material report

    // [laser]
    double wavelength_nm = 157.63;
    std::optional<std::array<double, 3>> n0;
    std::optional<std::array<double, 3>> pulse_energy_mj;
    BeamSpec beam;

    // [sequence]
    double T_over_TT = 1.0;
    int N = 1;
    double tau_ns = 0.0;
    double acceleration = 0.0;  // m/s^2
    double x_s_over_d = 0.0;

    /// Key-precise checks that do not need the material database.
    void validate() const;
    int point_count() const;
    /// Canonical text form; parse(serialize()) reproduces the config.
    std::string serialize() const;
};

ScanConfig parse_config(const std::string& text, const std::string& source = "<config>");
ScanConfig load_config(const std::filesystem::path& path);

/// "# "-prefixed copy of the serialized config for CSV headers.
std::string header_echo(const ScanConfig& cfg);
/// Reconstructs the config from the echo lines at the top of a CSV file.
ScanConfig parse_header_echo(const std::string& csv_text);

/// Shortest decimal string that reads back to the same double.
std::string format_number(double v);

/// Location of the bundled material table.
std::filesystem::path default_materials_path();

}  // namespace otima::config
