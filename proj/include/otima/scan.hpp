#pragma once

#include <string>
#include <vector>

#include "otima/config.hpp"
#include "otima/interferometer.hpp"
#include "otima/materials.hpp"

// Parameter scans over one axis. Every scan returns a table whose rows are
// in axis order regardless of how many threads evaluated them.
namespace otima::scan {

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    /// Index of a named column; throws std::out_of_range when absent.
    std::size_t column(const std::string& name) const;
    std::vector<double> values(const std::string& name) const;
};

/// One curve of a series: a particle species plus its optical ratios.
struct Member {
    std::string label;  // empty for a single-member run
    materials::ParticleSpecies species;
    double beta = 1.0;
    double rayleigh_ratio = 0.0;
};

std::vector<Member> resolve_members(const config::ScanConfig& cfg);

/// Experimental setup for one member at the given operating point.
interferometer::Setup make_setup(const config::ScanConfig& cfg, const Member& member, double T_over_TT,
                                 const std::array<double, 3>& n0, double tau_ns, interferometer::Model model,
                                 interferometer::DetectionMode mode);

/// n0 triple of the config, derived from pulse energies when needed.
std::array<double, 3> pulse_n0(const config::ScanConfig& cfg, const Member& member);

std::vector<double> axis_values(const config::ScanConfig& cfg);

/// Columns: T_over_TT, V_sin_<model>, V_full_<model> ..., S0 (per member,
/// suffixed ":<label>" in a series; per mode, suffixed "_<mode>" when
/// several modes are requested).
Table run_delay_scan(const config::ScanConfig& cfg, unsigned threads = 0);
/// Columns: n0_axis, V_sin_<model>_<mode>, V_full_<model>_<mode> ..., S0_<mode>.
Table run_power_scan(const config::ScanConfig& cfg, unsigned threads = 0);
/// Axis x_s (units of d) or tau (ns). Columns: axis, S_<model>, V_sin_<model> ..., S0.
Table run_signal_scan(const config::ScanConfig& cfg, unsigned threads = 0);
/// Dispatch on cfg.axis.
Table run_scan(const config::ScanConfig& cfg, unsigned threads = 0);

/// Parameter echo, column header and rows.
std::string to_csv(const config::ScanConfig& cfg, const Table& table);

/// Derived material and planning quantities as "key,value,unit" CSV.
std::string run_material_report(const config::ScanConfig& cfg);

}  // namespace otima::scan
