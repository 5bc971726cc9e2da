#include "otima/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "otima/constants.hpp"
#include "otima/error.hpp"

namespace otima::scan {

using interferometer::DetectionMode;
using interferometer::Model;

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// Runs body(i) for i in [0, count) on a small pool; the first exception in
// index order is rethrown.
template <typename F>
void parallel_for(std::size_t count, unsigned threads, F&& body)
{
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

std::string member_suffix(const Member& m) { return m.label.empty() ? "" : ":" + m.label; }

std::string mode_suffix(const config::ScanConfig& cfg, DetectionMode mode, bool always)
{
    return (always || cfg.modes.size() > 1) ? std::string("_") + interferometer::to_string(mode) : "";
}

struct Visibility {
    double v_sin = nan;
    double v_full = nan;
    double s0 = 0.0;
};

Visibility evaluate(const interferometer::Setup& setup)
{
    const auto f = interferometer::fringe(setup);
    Visibility v;
    v.s0 = f.S0;
    if (f.S0 > 0.0) {
        v.v_sin = f.V_sin;
        v.v_full = f.V;
    }
    return v;
}

materials::LaserPulse laser_for(const config::ScanConfig& cfg, double energy_mj)
{
    materials::LaserPulse laser;
    laser.wavelength = cfg.wavelength_nm * constants::nanometre;
    laser.pulse_energy = energy_mj * constants::millijoule;
    if (cfg.beam.profile == "flat_top") {
        laser.profile = materials::FlatTopProfile{cfg.beam.area_mm2 * constants::millimetre * constants::millimetre};
    } else {
        laser.profile = materials::GaussianProfile{cfg.beam.waist_y_um * 1e-6, cfg.beam.waist_z_um * 1e-6};
    }
    return laser;
}

}  // namespace

std::size_t Table::column(const std::string& name) const
{
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) {
        throw std::out_of_range("no column named " + name);
    }
    return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> Table::values(const std::string& name) const
{
    const std::size_t c = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        out.push_back(row[c]);
    }
    return out;
}

std::vector<Member> resolve_members(const config::ScanConfig& cfg)
{
    cfg.validate();
    const auto path = cfg.materials_file.empty() ? config::default_materials_path()
                                                 : std::filesystem::path(cfg.materials_file);
    const auto records = materials::load_materials(path);
    const double wavelength = cfg.wavelength_nm * constants::nanometre;
    const bool series = cfg.materials.size() > 1 || cfg.masses_amu.size() > 1;

    std::vector<Member> members;
    for (const auto& name : cfg.materials) {
        const auto& record = materials::find_material(records, name);
        for (double amu : cfg.masses_amu) {
            Member m;
            m.species = materials::ParticleSpecies::from_amu(record, amu);
            m.beta = cfg.beta ? *cfg.beta : materials::beta(record);
            if (cfg.rayleigh && record.epsilon2 > 0.0) {
                m.rayleigh_ratio = materials::rayleigh_ratio(m.species, wavelength);
            }
            if (series) {
                m.label = cfg.materials.size() > 1 ? name : config::format_number(amu);
            }
            members.push_back(std::move(m));
        }
    }
    return members;
}

std::array<double, 3> pulse_n0(const config::ScanConfig& cfg, const Member& member)
{
    if (cfg.n0) {
        return *cfg.n0;
    }
    const double wavelength = cfg.wavelength_nm * constants::nanometre;
    const double sigma = materials::absorption_cross_section(member.species, wavelength);
    std::array<double, 3> out{};
    for (int k = 0; k < 3; ++k) {
        out[k] = materials::n0_from_pulse(laser_for(cfg, (*cfg.pulse_energy_mj)[k]), sigma);
    }
    return out;
}

interferometer::Setup make_setup(const config::ScanConfig& cfg, const Member& member, double T_over_TT,
                                 const std::array<double, 3>& n0, double tau_ns, Model model, DetectionMode mode)
{
    interferometer::Setup s;
    const double d = 0.5 * cfg.wavelength_nm * constants::nanometre;
    s.sequence.d = d;
    s.sequence.T = T_over_TT * interferometer::talbot_time(member.species.mass, d);
    s.sequence.N = cfg.N;
    s.sequence.tau = tau_ns * constants::nanosecond;
    s.sequence.acceleration = cfg.acceleration;
    s.ensemble.mass = member.species.mass;
    s.ensemble.velocity_spread = cfg.velocity_spread;
    s.ensemble.cloud_extension = cfg.cloud_extension;
    for (int k = 0; k < 3; ++k) {
        s.pulses[k] = grating::GratingPulse::from_beta(n0[k], member.beta, member.rayleigh_ratio);
    }
    s.model = model;
    s.third_mode = mode;
    return s;
}

std::vector<double> axis_values(const config::ScanConfig& cfg)
{
    const int n = cfg.point_count();
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out[i] = i == n - 1 ? cfg.stop : cfg.start + (cfg.stop - cfg.start) * i / (n - 1);
    }
    return out;
}

Table run_delay_scan(const config::ScanConfig& cfg, unsigned threads)
{
    if (cfg.axis != config::Axis::delay) {
        throw ConfigError("[run] axis: scan-delay needs axis = delay");
    }
    const auto members = resolve_members(cfg);
    const auto axis = axis_values(cfg);

    Table table;
    table.columns.push_back("T_over_TT");
    for (const auto& m : members) {
        for (auto mode : cfg.modes) {
            const std::string tail = mode_suffix(cfg, mode, false) + member_suffix(m);
            for (auto model : cfg.models) {
                const std::string name = interferometer::to_string(model);
                table.columns.push_back("V_sin_" + name + tail);
                table.columns.push_back("V_full_" + name + tail);
            }
            table.columns.push_back("S0" + tail);
        }
    }
    table.rows.assign(axis.size(), std::vector<double>(table.columns.size(), nan));

    std::vector<std::array<double, 3>> n0;
    for (const auto& m : members) {
        n0.push_back(pulse_n0(cfg, m));
    }
    parallel_for(axis.size(), threads, [&](std::size_t i) {
        auto& row = table.rows[i];
        std::size_t c = 0;
        row[c++] = axis[i];
        for (std::size_t k = 0; k < members.size(); ++k) {
            for (auto mode : cfg.modes) {
                double s0 = nan;
                for (auto model : cfg.models) {
                    const auto v = evaluate(make_setup(cfg, members[k], axis[i], n0[k], cfg.tau_ns, model, mode));
                    row[c++] = v.v_sin;
                    row[c++] = v.v_full;
                    s0 = v.s0;
                }
                row[c++] = s0;
            }
        }
    });
    return table;
}

Table run_power_scan(const config::ScanConfig& cfg, unsigned threads)
{
    if (cfg.axis != config::Axis::power2 && cfg.axis != config::Axis::power3) {
        throw ConfigError("[run] axis: scan-power needs axis = power2 or power3");
    }
    const auto members = resolve_members(cfg);
    const auto axis = axis_values(cfg);
    const int varied = cfg.axis == config::Axis::power2 ? 1 : 2;

    Table table;
    table.columns.push_back("n0_axis");
    for (const auto& m : members) {
        for (auto mode : cfg.modes) {
            const std::string tail = mode_suffix(cfg, mode, true) + member_suffix(m);
            for (auto model : cfg.models) {
                const std::string name = interferometer::to_string(model);
                table.columns.push_back("V_sin_" + name + tail);
                table.columns.push_back("V_full_" + name + tail);
            }
            table.columns.push_back("S0" + tail);
        }
    }
    table.rows.assign(axis.size(), std::vector<double>(table.columns.size(), nan));

    parallel_for(axis.size(), threads, [&](std::size_t i) {
        auto& row = table.rows[i];
        std::size_t c = 0;
        row[c++] = axis[i];
        for (const auto& m : members) {
            auto n0 = *cfg.n0;
            n0[varied] = axis[i];
            for (auto mode : cfg.modes) {
                double s0 = nan;
                for (auto model : cfg.models) {
                    const auto v = evaluate(make_setup(cfg, m, cfg.T_over_TT, n0, cfg.tau_ns, model, mode));
                    row[c++] = v.v_sin;
                    row[c++] = v.v_full;
                    s0 = v.s0;
                }
                row[c++] = s0;
            }
        }
    });
    return table;
}

Table run_signal_scan(const config::ScanConfig& cfg, unsigned threads)
{
    if (cfg.axis != config::Axis::x_s && cfg.axis != config::Axis::tau) {
        throw ConfigError("[run] axis: signal needs axis = x_s or tau");
    }
    const auto members = resolve_members(cfg);
    const auto axis = axis_values(cfg);
    const bool over_x = cfg.axis == config::Axis::x_s;

    Table table;
    table.columns.push_back(over_x ? "x_s_over_d" : "tau_ns");
    for (const auto& m : members) {
        for (auto mode : cfg.modes) {
            const std::string tail = mode_suffix(cfg, mode, false) + member_suffix(m);
            for (auto model : cfg.models) {
                const std::string name = interferometer::to_string(model);
                table.columns.push_back("S_" + name + tail);
                table.columns.push_back("V_sin_" + name + tail);
            }
            table.columns.push_back("S0" + tail);
        }
    }
    table.rows.assign(axis.size(), std::vector<double>(table.columns.size(), nan));

    std::vector<std::array<double, 3>> n0;
    for (const auto& m : members) {
        n0.push_back(pulse_n0(cfg, m));
    }
    const double d = 0.5 * cfg.wavelength_nm * constants::nanometre;
    parallel_for(axis.size(), threads, [&](std::size_t i) {
        auto& row = table.rows[i];
        std::size_t c = 0;
        row[c++] = axis[i];
        const double tau = over_x ? cfg.tau_ns : axis[i];
        const double x_s = (over_x ? axis[i] : cfg.x_s_over_d) * d;
        for (std::size_t k = 0; k < members.size(); ++k) {
            for (auto mode : cfg.modes) {
                double s0 = nan;
                for (auto model : cfg.models) {
                    const auto f = interferometer::fringe(
                        make_setup(cfg, members[k], cfg.T_over_TT, n0[k], tau, model, mode));
                    row[c++] = f.signal.value(x_s).real();
                    row[c++] = f.S0 > 0.0 ? f.V_sin : nan;
                    s0 = f.S0;
                }
                row[c++] = s0;
            }
        }
    });
    return table;
}

Table run_scan(const config::ScanConfig& cfg, unsigned threads)
{
    switch (cfg.axis) {
        case config::Axis::power2:
        case config::Axis::power3: return run_power_scan(cfg, threads);
        case config::Axis::x_s:
        case config::Axis::tau: return run_signal_scan(cfg, threads);
        case config::Axis::delay: break;
    }
    return run_delay_scan(cfg, threads);
}

std::string to_csv(const config::ScanConfig& cfg, const Table& table)
{
    std::ostringstream out;
    out << config::header_echo(cfg);
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        out << (c ? "," : "") << table.columns[c];
    }
    out << '\n';
    char buf[40];
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (std::isnan(row[c])) {
                out << (c ? ",nan" : "nan");
                continue;
            }
            std::snprintf(buf, sizeof buf, "%.12g", row[c]);
            out << (c ? "," : "") << buf;
        }
        out << '\n';
    }
    return out.str();
}

std::string run_material_report(const config::ScanConfig& cfg)
{
    const auto members = resolve_members(cfg);
    const double wavelength = cfg.wavelength_nm * constants::nanometre;
    const double d = 0.5 * wavelength;

    struct Line {
        std::string key;
        std::string unit;
        std::vector<double> values;
    };
    std::vector<Line> lines;
    const auto add = [&](const std::string& key, const std::string& unit, std::size_t k, double v) {
        auto it = std::find_if(lines.begin(), lines.end(), [&](const Line& l) { return l.key == key; });
        if (it == lines.end()) {
            lines.push_back({key, unit, std::vector<double>(members.size(), nan)});
            it = lines.end() - 1;
        }
        it->values[k] = v;
    };

    const bool beam_given = (cfg.beam.profile == "gaussian" && cfg.beam.waist_y_um > 0.0 && cfg.beam.waist_z_um > 0.0)
                            || (cfg.beam.profile == "flat_top" && cfg.beam.area_mm2 > 0.0);
    for (std::size_t k = 0; k < members.size(); ++k) {
        const auto& m = members[k];
        const auto& s = m.species;
        const double tt = interferometer::talbot_time(s.mass, d);
        const double fall_time = (cfg.N + 1) * cfg.T_over_TT * tt;
        add("mass", "amu", k, s.mass / constants::atomic_mass_unit);
        add("radius", "nm", k, s.radius() / constants::nanometre);
        add("grating_period", "nm", k, d / constants::nanometre);
        add("sigma_abs", "m^2", k, materials::absorption_cross_section(s, wavelength));
        add("polarizability", "m^3", k, materials::polarizability(s));
        add("beta", "1", k, m.beta);
        add("sigma_R_over_sigma_abs", "1", k, m.rayleigh_ratio);
        if (beam_given) {
            const double sigma = materials::absorption_cross_section(s, wavelength);
            add("n0_per_mJ", "1/mJ", k, materials::n0_from_pulse(laser_for(cfg, 1.0), sigma));
        }
        const auto n0 = pulse_n0(cfg, m);
        add("n0_1", "1", k, n0[0]);
        add("n0_2", "1", k, n0[1]);
        add("n0_3", "1", k, n0[2]);
        add("talbot_time", "ms", k, tt * 1e3);
        add("interferometer_time", "ms", k, fall_time * 1e3);
        add("free_fall_drop", "mm", k, 0.5 * constants::standard_gravity * fall_time * fall_time * 1e3);
        if (s.material.work_function_ev) {
            add("ionization_energy", "eV", k, materials::ionization_energy(*s.material.work_function_ev, s.radius()));
        }
        if (cfg.forward_velocity > 0.0) {
            add("de_broglie_wavelength", "m", k, materials::de_broglie(s.mass, cfg.forward_velocity));
        }
    }

    std::ostringstream out;
    out << config::header_echo(cfg);
    out << "quantity,unit";
    for (const auto& m : members) {
        out << ',' << (m.label.empty() ? m.species.material.name : m.label);
    }
    out << '\n';
    char buf[40];
    for (const auto& line : lines) {
        out << line.key << ',' << line.unit;
        for (double v : line.values) {
            std::snprintf(buf, sizeof buf, "%.6g", v);
            out << ',' << (std::isnan(v) ? "nan" : buf);
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace otima::scan
