#include "otima/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "otima/error.hpp"

#ifndef OTIMA_DATA_DIR
#define OTIMA_DATA_DIR "data"
#endif

namespace otima::config {

namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        out.push_back(trim(item));
    }
    return out;
}

const std::set<std::string> known_keys = {
    "run.name",          "run.axis",           "run.start",          "run.stop",
    "run.points",        "run.models",         "run.third_mode",     "run.seed",
    "particle.materials_file", "particle.material", "particle.mass_amu", "particle.beta",
    "particle.rayleigh", "particle.velocity_spread", "particle.cloud_extension", "particle.forward_velocity",
    "laser.wavelength_nm", "laser.n0",         "laser.pulse_energy_mj", "laser.profile",
    "laser.waist_y_um",  "laser.waist_z_um",   "laser.area_mm2",
    "sequence.T_over_TT", "sequence.N",        "sequence.tau_ns",    "sequence.acceleration",
    "sequence.x_s_over_d",
};

class Reader {
public:
    explicit Reader(const Document& doc) : doc_(doc) {}

    const Entry* find(const std::string& key) const
    {
        const auto it = doc_.entries.find(key);
        return it == doc_.entries.end() ? nullptr : &it->second;
    }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const
    {
        const Entry* e = find(key);
        std::ostringstream msg;
        msg << doc_.source;
        if (e != nullptr) {
            msg << ':' << e->line;
        }
        msg << ": " << display(key) << ": " << what;
        throw ConfigError(msg.str());
    }

    double number(const std::string& key, const std::string& text) const
    {
        double v = 0.0;
        const auto t = trim(text);
        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(v)) {
            fail(key, "expected a number, got '" + t + "'");
        }
        return v;
    }

    void read(const std::string& key, double& out) const
    {
        if (const Entry* e = find(key)) {
            out = number(key, e->value);
        }
    }

    void read(const std::string& key, int& out) const
    {
        if (const Entry* e = find(key)) {
            const double v = number(key, e->value);
            if (v != std::floor(v) || std::abs(v) > 1e9) {
                fail(key, "expected an integer");
            }
            out = static_cast<int>(v);
        }
    }

    void read(const std::string& key, std::string& out) const
    {
        if (const Entry* e = find(key)) {
            out = e->value;
        }
    }

    void read(const std::string& key, bool& out) const
    {
        if (const Entry* e = find(key)) {
            if (e->value == "true" || e->value == "on" || e->value == "yes") {
                out = true;
            } else if (e->value == "false" || e->value == "off" || e->value == "no") {
                out = false;
            } else {
                fail(key, "expected true or false");
            }
        }
    }

    std::optional<std::array<double, 3>> triple(const std::string& key) const
    {
        const Entry* e = find(key);
        if (e == nullptr) {
            return std::nullopt;
        }
        const auto items = split_list(e->value);
        if (items.size() != 3) {
            fail(key, "expected three comma-separated values");
        }
        return std::array<double, 3>{number(key, items[0]), number(key, items[1]), number(key, items[2])};
    }

    static std::string display(const std::string& key)
    {
        const auto dot = key.find('.');
        return "[" + key.substr(0, dot) + "] " + key.substr(dot + 1);
    }

private:
    const Document& doc_;
};

interferometer::Model parse_model(const Reader& r, const std::string& key, const std::string& s)
{
    if (s == "quantum") {
        return interferometer::Model::quantum;
    }
    if (s == "classical") {
        return interferometer::Model::classical;
    }
    if (s == "decohered") {
        return interferometer::Model::decohered;
    }
    r.fail(key, "unknown model '" + s + "' (quantum, classical, decohered)");
}

[[noreturn]] void invalid(const std::string& key, const std::string& what)
{
    throw ConfigError(key + ": " + what);
}

}  // namespace

const char* to_string(Axis a)
{
    switch (a) {
        case Axis::power2: return "power2";
        case Axis::power3: return "power3";
        case Axis::x_s: return "x_s";
        case Axis::tau: return "tau";
        case Axis::delay: break;
    }
    return "delay";
}

Document parse_document(const std::string& text, const std::string& source)
{
    Document doc;
    doc.source = source;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    const auto fail = [&](const std::string& what) {
        throw ParseError(source + ":" + std::to_string(line_no) + ": " + what);
    };
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) {
            line.erase(comment);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                fail("unterminated section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) {
                fail("empty section name");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            fail("expected 'key = value'");
        }
        if (section.empty()) {
            fail("key outside of any section");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            fail("missing key name");
        }
        const std::string full = section + "." + key;
        if (doc.entries.count(full) != 0) {
            fail("duplicate key '" + key + "' (first set on line " + std::to_string(doc.entries[full].line) + ")");
        }
        doc.entries[full] = {value, line_no};
    }
    return doc;
}

ScanConfig parse_config(const std::string& text, const std::string& source)
{
    const Document doc = parse_document(text, source);
    const Reader r(doc);
    for (const auto& [key, entry] : doc.entries) {
        if (known_keys.count(key) == 0) {
            throw ConfigError(source + ":" + std::to_string(entry.line) + ": unknown key " + Reader::display(key));
        }
    }

    ScanConfig cfg;
    r.read("run.name", cfg.name);
    if (const Entry* e = r.find("run.axis")) {
        const std::string& a = e->value;
        if (a == "delay") {
            cfg.axis = Axis::delay;
        } else if (a == "power2") {
            cfg.axis = Axis::power2;
        } else if (a == "power3") {
            cfg.axis = Axis::power3;
        } else if (a == "x_s") {
            cfg.axis = Axis::x_s;
        } else if (a == "tau") {
            cfg.axis = Axis::tau;
        } else {
            r.fail("run.axis", "unknown axis '" + a + "' (delay, power2, power3, x_s, tau)");
        }
    }
    r.read("run.start", cfg.start);
    r.read("run.stop", cfg.stop);
    r.read("run.points", cfg.points);
    if (const Entry* e = r.find("run.models")) {
        cfg.models.clear();
        for (const auto& m : split_list(e->value)) {
            const auto model = parse_model(r, "run.models", m);
            if (std::find(cfg.models.begin(), cfg.models.end(), model) != cfg.models.end()) {
                r.fail("run.models", "model '" + m + "' listed twice");
            }
            cfg.models.push_back(model);
        }
    }
    if (const Entry* e = r.find("run.third_mode")) {
        using interferometer::DetectionMode;
        if (e->value == "neutral") {
            cfg.modes = {DetectionMode::neutral};
        } else if (e->value == "inverse") {
            cfg.modes = {DetectionMode::inverse};
        } else if (e->value == "both") {
            cfg.modes = {DetectionMode::neutral, DetectionMode::inverse};
        } else {
            r.fail("run.third_mode", "expected neutral, inverse or both");
        }
    } else if (cfg.axis == Axis::power2 || cfg.axis == Axis::power3) {
        cfg.modes = {interferometer::DetectionMode::neutral, interferometer::DetectionMode::inverse};
    }
    if (const Entry* e = r.find("run.seed")) {
        const std::string t = trim(e->value);
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
            r.fail("run.seed", "expected a non-negative integer");
        }
        cfg.seed = v;
    }

    r.read("particle.materials_file", cfg.materials_file);
    if (const Entry* e = r.find("particle.material")) {
        cfg.materials = split_list(e->value);
    }
    if (const Entry* e = r.find("particle.mass_amu")) {
        cfg.masses_amu.clear();
        for (const auto& m : split_list(e->value)) {
            cfg.masses_amu.push_back(r.number("particle.mass_amu", m));
        }
    }
    if (const Entry* e = r.find("particle.beta")) {
        cfg.beta = r.number("particle.beta", e->value);
    }
    r.read("particle.rayleigh", cfg.rayleigh);
    r.read("particle.velocity_spread", cfg.velocity_spread);
    r.read("particle.cloud_extension", cfg.cloud_extension);
    r.read("particle.forward_velocity", cfg.forward_velocity);

    r.read("laser.wavelength_nm", cfg.wavelength_nm);
    cfg.n0 = r.triple("laser.n0");
    cfg.pulse_energy_mj = r.triple("laser.pulse_energy_mj");
    r.read("laser.profile", cfg.beam.profile);
    r.read("laser.waist_y_um", cfg.beam.waist_y_um);
    r.read("laser.waist_z_um", cfg.beam.waist_z_um);
    r.read("laser.area_mm2", cfg.beam.area_mm2);

    r.read("sequence.T_over_TT", cfg.T_over_TT);
    r.read("sequence.N", cfg.N);
    r.read("sequence.tau_ns", cfg.tau_ns);
    r.read("sequence.acceleration", cfg.acceleration);
    r.read("sequence.x_s_over_d", cfg.x_s_over_d);

    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        // attach the line of the offending key when it was given explicitly
        const std::string what = e.what();
        const auto colon = what.find(':');
        const std::string key = what.substr(0, colon);
        const auto dot = key.find('.');
        if (dot != std::string::npos && doc.has(key)) {
            r.fail(key, trim(what.substr(colon + 1)));
        }
        throw ConfigError(source + ": " + what);
    }
    return cfg;
}

void ScanConfig::validate() const
{
    if (name.empty() || name.find_first_of("\n=#;") != std::string::npos) {
        invalid("run.name", "must be non-empty and free of '=', '#', ';'");
    }
    if (!(stop > start)) {
        invalid("run.stop", "must exceed run.start");
    }
    if (points != 0 && points < 2) {
        invalid("run.points", "at least 2 points required");
    }
    if (points > 1000000) {
        invalid("run.points", "too many points");
    }
    if (models.empty()) {
        invalid("run.models", "at least one model required");
    }
    if (materials.empty() || std::any_of(materials.begin(), materials.end(),
                                         [](const std::string& m) { return m.empty(); })) {
        invalid("particle.material", "empty material name");
    }
    if (masses_amu.empty() || std::any_of(masses_amu.begin(), masses_amu.end(),
                                          [](double m) { return !(m > 0.0); })) {
        invalid("particle.mass_amu", "masses must be positive");
    }
    if (materials.size() > 1 && masses_amu.size() > 1) {
        invalid("particle.mass_amu", "a series may vary the material or the mass, not both");
    }
    if (beta && (*beta == 0.0)) {
        invalid("particle.beta", "must be nonzero");
    }
    if (!(velocity_spread > 0.0)) {
        invalid("particle.velocity_spread", "must be positive");
    }
    if (!(cloud_extension > 0.0)) {
        invalid("particle.cloud_extension", "must be positive");
    }
    if (!(forward_velocity >= 0.0)) {
        invalid("particle.forward_velocity", "must be non-negative");
    }
    if (!(wavelength_nm > 0.0)) {
        invalid("laser.wavelength_nm", "must be positive");
    }
    if (n0.has_value() == pulse_energy_mj.has_value()) {
        invalid("laser.n0", "give exactly one of laser.n0 and laser.pulse_energy_mj");
    }
    if (n0) {
        for (double v : *n0) {
            if (!(v >= 0.0)) {
                invalid("laser.n0", "values must be non-negative");
            }
        }
    }
    if (pulse_energy_mj) {
        for (double v : *pulse_energy_mj) {
            if (!(v >= 0.0)) {
                invalid("laser.pulse_energy_mj", "values must be non-negative");
            }
        }
        if (beam.profile == "gaussian") {
            if (!(beam.waist_y_um > 0.0 && beam.waist_z_um > 0.0)) {
                invalid("laser.waist_y_um", "gaussian profile needs positive waists");
            }
        } else if (beam.profile == "flat_top") {
            if (!(beam.area_mm2 > 0.0)) {
                invalid("laser.area_mm2", "flat_top profile needs a positive area");
            }
        } else {
            invalid("laser.profile", "expected gaussian or flat_top");
        }
    }
    if ((axis == Axis::power2 || axis == Axis::power3) && !n0) {
        invalid("laser.n0", "power scans need n0 values");
    }
    if ((axis == Axis::power2 || axis == Axis::power3) && start < 0.0) {
        invalid("run.start", "photon numbers cannot be negative");
    }
    if (axis == Axis::delay && !(start > 0.0)) {
        invalid("run.start", "delay axis must start above zero");
    }
    if (!(T_over_TT > 0.0)) {
        invalid("sequence.T_over_TT", "must be positive");
    }
    if (N < 1) {
        invalid("sequence.N", "must be at least 1");
    }
}

int ScanConfig::point_count() const
{
    if (points != 0) {
        return points;
    }
    switch (axis) {
        case Axis::delay: return 300;
        case Axis::power2:
        case Axis::power3: return 200;
        case Axis::x_s:
        case Axis::tau: break;
    }
    return 200;
}

std::string format_number(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

namespace {

std::string join_numbers(const std::array<double, 3>& a)
{
    return format_number(a[0]) + ", " + format_number(a[1]) + ", " + format_number(a[2]);
}

}  // namespace

std::string ScanConfig::serialize() const
{
    std::ostringstream out;
    out << "[run]\n";
    out << "name = " << name << '\n';
    out << "axis = " << to_string(axis) << '\n';
    out << "start = " << format_number(start) << '\n';
    out << "stop = " << format_number(stop) << '\n';
    out << "points = " << point_count() << '\n';
    out << "models = ";
    for (std::size_t i = 0; i < models.size(); ++i) {
        out << (i ? ", " : "") << interferometer::to_string(models[i]);
    }
    out << '\n';
    out << "third_mode = "
        << (modes.size() == 2 ? "both" : interferometer::to_string(modes.front())) << '\n';
    out << "seed = " << seed << '\n';

    out << "\n[particle]\n";
    if (!materials_file.empty()) {
        out << "materials_file = " << materials_file << '\n';
    }
    out << "material = ";
    for (std::size_t i = 0; i < materials.size(); ++i) {
        out << (i ? ", " : "") << materials[i];
    }
    out << '\n';
    out << "mass_amu = ";
    for (std::size_t i = 0; i < masses_amu.size(); ++i) {
        out << (i ? ", " : "") << format_number(masses_amu[i]);
    }
    out << '\n';
    if (beta) {
        out << "beta = " << format_number(*beta) << '\n';
    }
    out << "rayleigh = " << (rayleigh ? "true" : "false") << '\n';
    out << "velocity_spread = " << format_number(velocity_spread) << '\n';
    out << "cloud_extension = " << format_number(cloud_extension) << '\n';
    if (forward_velocity > 0.0) {
        out << "forward_velocity = " << format_number(forward_velocity) << '\n';
    }

    out << "\n[laser]\n";
    out << "wavelength_nm = " << format_number(wavelength_nm) << '\n';
    if (n0) {
        out << "n0 = " << join_numbers(*n0) << '\n';
    }
    if (pulse_energy_mj) {
        out << "pulse_energy_mj = " << join_numbers(*pulse_energy_mj) << '\n';
        out << "profile = " << beam.profile << '\n';
        if (beam.profile == "gaussian") {
            out << "waist_y_um = " << format_number(beam.waist_y_um) << '\n';
            out << "waist_z_um = " << format_number(beam.waist_z_um) << '\n';
        } else {
            out << "area_mm2 = " << format_number(beam.area_mm2) << '\n';
        }
    }

    out << "\n[sequence]\n";
    out << "T_over_TT = " << format_number(T_over_TT) << '\n';
    out << "N = " << N << '\n';
    out << "tau_ns = " << format_number(tau_ns) << '\n';
    out << "acceleration = " << format_number(acceleration) << '\n';
    out << "x_s_over_d = " << format_number(x_s_over_d) << '\n';
    return out.str();
}

ScanConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path.string() + ": cannot open config file");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    ScanConfig cfg = parse_config(buffer.str(), path.string());
    if (!cfg.materials_file.empty()) {
        std::filesystem::path file(cfg.materials_file);
        if (file.is_relative()) {
            cfg.materials_file = (path.parent_path() / file).lexically_normal().string();
        }
    }
    return cfg;
}

std::string header_echo(const ScanConfig& cfg)
{
    std::istringstream in(cfg.serialize());
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        out << (line.empty() ? "#" : "# " + line) << '\n';
    }
    return out.str();
}

ScanConfig parse_header_echo(const std::string& csv_text)
{
    std::istringstream in(csv_text);
    std::ostringstream body;
    std::string line;
    while (std::getline(in, line) && !line.empty() && line.front() == '#') {
        body << (line.size() > 2 ? line.substr(2) : std::string()) << '\n';
    }
    return parse_config(body.str(), "<csv header>");
}

std::filesystem::path default_materials_path()
{
    return std::filesystem::path(OTIMA_DATA_DIR) / "materials.txt";
}

}  // namespace otima::config
