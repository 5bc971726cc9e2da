#include "otima/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "otima/config.hpp"
#include "otima/error.hpp"
#include "otima/scan.hpp"
#include "otima/verify.hpp"

namespace otima::cli {

namespace {

struct Options {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> models;
    std::string level = "fast";
    unsigned threads = 0;
};

config::ScanConfig load(const Options& o)
{
    auto cfg = config::load_config(o.config_path);
    if (!o.models.empty()) {
        cfg.models.clear();
        for (const auto& m : o.models) {
            if (m == "quantum") {
                cfg.models.push_back(interferometer::Model::quantum);
            } else if (m == "classical") {
                cfg.models.push_back(interferometer::Model::classical);
            } else {
                cfg.models.push_back(interferometer::Model::decohered);
            }
        }
    }
    if (o.seed) {
        cfg.seed = *o.seed;
    }
    return cfg;
}

void emit(const Options& o, const std::string& text, std::ostream& out)
{
    if (o.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(o.out_path, std::ios::binary);
    if (!file) {
        throw ConfigError(o.out_path + ": cannot open output file");
    }
    file << text;
    if (!file) {
        throw ConfigError(o.out_path + ": write failed");
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Simulation of a pulsed optical ionization-grating matter-wave interferometer"};
    app.require_subcommand(1);
    Options o;

    const auto add_scan_flags = [&](CLI::App* sub, bool with_model) {
        sub->add_option("--config", o.config_path, "scan configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", o.out_path, "output file (default: stdout)");
        sub->add_option("--seed", o.seed, "seed recorded in the parameter echo");
        sub->add_option("--threads", o.threads, "worker threads (0: all cores)");
        if (with_model) {
            sub->add_option("--model", o.models, "override the model list")
                ->delimiter(',')
                ->check(CLI::IsMember({"quantum", "classical", "decohered"}));
        }
    };
    auto* delay = app.add_subcommand("scan-delay", "visibility versus T/T_T");
    add_scan_flags(delay, true);
    auto* power = app.add_subcommand("scan-power", "visibility and transmission versus n0 of one pulse");
    add_scan_flags(power, true);
    auto* signal = app.add_subcommand("signal", "detection signal versus third-pulse offset or tau");
    add_scan_flags(signal, true);
    auto* material = app.add_subcommand("material", "derived optical and planning quantities");
    add_scan_flags(material, false);
    auto* verify_cmd = app.add_subcommand("verify", "compare closed forms with brute-force oracles");
    verify_cmd->add_option("--level", o.level, "fast or full")->check(CLI::IsMember({"fast", "full"}));
    verify_cmd->add_option("--seed", o.seed, "Monte-Carlo seed");
    verify_cmd->add_option("--out", o.out_path, "report file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        if (verify_cmd->parsed()) {
            const auto level = o.level == "full" ? verify::Level::full : verify::Level::fast;
            const auto report = verify::run(level, verify::Evaluators::library(), o.seed.value_or(1));
            emit(o, report.text(), out);
            return report.exit_code();
        }
        const auto cfg = load(o);
        if (material->parsed()) {
            emit(o, scan::run_material_report(cfg), out);
            return exit_ok;
        }
        scan::Table table;
        if (delay->parsed()) {
            table = scan::run_delay_scan(cfg, o.threads);
        } else if (power->parsed()) {
            table = scan::run_power_scan(cfg, o.threads);
        } else {
            table = scan::run_signal_scan(cfg, o.threads);
        }
        emit(o, scan::to_csv(cfg, table), out);
        return exit_ok;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const ParseError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::domain_error& e) {
        err << "invalid parameter: " << e.what() << '\n';
        return exit_config;
    } catch (const PrecisionError& e) {
        err << "precision failure: " << e.what() << '\n';
        return exit_precision;
    } catch (const DegenerateSignalError& e) {
        err << "precision failure: " << e.what() << '\n';
        return exit_precision;
    }
}

}  // namespace otima::cli
