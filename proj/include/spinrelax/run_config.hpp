#pragma once

// Run configuration for the command-line tool and its text format.
//
// One "key = value [unit]" per line, '#' starts a comment. Every dimensional
// value carries its unit tag; unknown or repeated keys are errors.
//
//   particle = proton            # or: custom
//   particle_mass = 938.27 MeV   # custom only
//   particle_g_factor = 5.58     # custom only
//   particle_charge_sign = 1     # custom only
//   hz = 10000 Oe                # Oe or T
//   h1 = 100 Oe                  # Oe or T
//   delta = 0.033 per-meter      # per-meter or MeV
//   t_max = 5 relaxation-times   # relaxation-times, s or inverse-MeV
//   points = 1000
//   out_csv = fig1.csv
//   out_svg = fig1.svg

#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "spinrelax/evolution.hpp"
#include "spinrelax/spectral.hpp"
#include "spinrelax/units.hpp"

namespace spinrelax {

enum class DeltaUnit { per_meter, mev };
enum class TimeUnit { relaxation_times, seconds, inverse_mev };

/// Error in a configuration value, with its source position.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& where, int line, const std::string& field, const std::string& what)
        : std::runtime_error(format(where, line, field, what)), line_(line), field_(field) {}

    int line() const { return line_; }
    const std::string& field() const { return field_; }

private:
    static std::string format(const std::string& where, int line, const std::string& field, const std::string& what) {
        std::ostringstream os;
        os << where;
        if (line > 0) os << ":" << line;
        if (!field.empty()) os << ": field '" << field << "'";
        os << ": " << what;
        return os.str();
    }

    int line_;
    std::string field_;
};

struct RunConfig {
    std::string particle_name = "proton";  // preset name, or "custom"
    ParticleSpec particle = ParticleSpec::proton();
    double hz_oe = 1.0e4;
    double h1_oe = 1.0e2;
    double delta_value = 0.033;
    DeltaUnit delta_unit = DeltaUnit::per_meter;
    double t_max_value = 5.0;
    TimeUnit t_max_unit = TimeUnit::relaxation_times;
    std::size_t points = 1000;
    std::string out_csv;
    std::string out_svg;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;

    void validate(const std::string& where = "config") const {
        try {
            particle.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(where, 0, "particle", e.what());
        }
        if (!(hz_oe >= 0.0) || !std::isfinite(hz_oe)) throw ConfigError(where, 0, "hz", "must be non-negative");
        if (!(h1_oe >= 0.0) || !std::isfinite(h1_oe)) throw ConfigError(where, 0, "h1", "must be non-negative");
        if (!(delta_value > 0.0) || !std::isfinite(delta_value)) throw ConfigError(where, 0, "delta", "must be positive");
        if (!(t_max_value >= 0.0) || !std::isfinite(t_max_value)) throw ConfigError(where, 0, "t_max", "must be non-negative");
        if (points < 2) throw ConfigError(where, 0, "points", "must be at least 2");
    }

    double delta_mev() const {
        return delta_unit == DeltaUnit::mev ? delta_value : inverse_meter_to_mev(delta_value);
    }

    CouplingParams coupling() const {
        return CouplingParams::from_fields(particle, oersted_to_tesla(hz_oe), oersted_to_tesla(h1_oe), delta_mev());
    }

    EvolutionParams evolution() const { return EvolutionParams::from_coupling(coupling()); }

    /// Upper end of the time grid in MeV^-1. One relaxation time is 1/W = 1/(2 gamma).
    double t_max_inverse_mev(const EvolutionParams& p) const {
        switch (t_max_unit) {
            case TimeUnit::inverse_mev: return t_max_value;
            case TimeUnit::seconds: return seconds_to_mev_inverse(t_max_value);
            case TimeUnit::relaxation_times:
                if (p.gamma == 0.0)
                    throw ConfigError("config", 0, "t_max", "relaxation time is infinite when H1 = 0; give t_max in s");
                return t_max_value / (2.0 * p.gamma);
        }
        return 0.0;
    }
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline bool parse_number(std::string_view text, double& out) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

inline std::string format_number(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc()) throw std::runtime_error("number formatting failed");
    return std::string(buf, ptr);
}

}  // namespace detail

/// Parses the key-value format. `where` names the source in diagnostics.
inline RunConfig parse_config(std::istream& in, const std::string& where = "config") {
    RunConfig cfg;
    std::set<std::string> seen;
    std::map<std::string, int> particle_keys;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = detail::trim(std::string_view(raw).substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where, line_no, "", "expected 'key = value'");
        const std::string key = detail::trim(std::string_view(line).substr(0, eq));
        const std::string value = detail::trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) throw ConfigError(where, line_no, "", "missing key");
        if (!seen.insert(key).second) throw ConfigError(where, line_no, key, "repeated key");

        auto fail = [&](const std::string& what) -> ConfigError { return {where, line_no, key, what}; };
        // Splits "<number> <unit>"; unit may be empty.
        auto number_and_unit = [&](double& x) {
            std::istringstream ss(value);
            std::string num, unit, extra;
            ss >> num >> unit >> extra;
            if (!extra.empty()) throw fail("unexpected text after unit");
            if (!detail::parse_number(num, x)) throw fail("'" + num + "' is not a number");
            return unit;
        };

        if (key == "particle") {
            if (value == "custom") {
                cfg.particle_name = "custom";
            } else {
                try {
                    cfg.particle = particle_preset(value);
                } catch (const std::invalid_argument& e) {
                    throw fail(e.what());
                }
                cfg.particle_name = value;
            }
        } else if (key == "particle_mass") {
            double x;
            if (number_and_unit(x) != "MeV") throw fail("unit must be MeV");
            cfg.particle.mass = x;
            particle_keys[key] = line_no;
        } else if (key == "particle_g_factor") {
            double x;
            if (!number_and_unit(x).empty()) throw fail("g-factor is dimensionless");
            cfg.particle.g_factor = x;
            particle_keys[key] = line_no;
        } else if (key == "particle_charge_sign") {
            double x;
            if (!number_and_unit(x).empty()) throw fail("charge sign is dimensionless");
            if (x != 1.0 && x != -1.0) throw fail("must be +1 or -1");
            cfg.particle.charge_sign = static_cast<int>(x);
            particle_keys[key] = line_no;
        } else if (key == "hz" || key == "h1") {
            double x;
            const auto unit = number_and_unit(x);
            double oe;
            if (unit == "Oe")
                oe = x;
            else if (unit == "T")
                oe = tesla_to_oersted(x);
            else
                throw fail("unit must be Oe or T");
            if (!(oe >= 0.0)) throw fail("must be non-negative");
            (key == "hz" ? cfg.hz_oe : cfg.h1_oe) = oe;
        } else if (key == "delta") {
            double x;
            const auto unit = number_and_unit(x);
            if (unit == "per-meter")
                cfg.delta_unit = DeltaUnit::per_meter;
            else if (unit == "MeV")
                cfg.delta_unit = DeltaUnit::mev;
            else
                throw fail("unit must be per-meter or MeV");
            if (!(x > 0.0)) throw fail("must be positive");
            cfg.delta_value = x;
        } else if (key == "t_max") {
            double x;
            const auto unit = number_and_unit(x);
            if (unit == "relaxation-times")
                cfg.t_max_unit = TimeUnit::relaxation_times;
            else if (unit == "s")
                cfg.t_max_unit = TimeUnit::seconds;
            else if (unit == "inverse-MeV")
                cfg.t_max_unit = TimeUnit::inverse_mev;
            else
                throw fail("unit must be relaxation-times, s or inverse-MeV");
            if (!(x >= 0.0)) throw fail("must be non-negative");
            cfg.t_max_value = x;
        } else if (key == "points") {
            double x;
            if (!number_and_unit(x).empty()) throw fail("points is dimensionless");
            if (x < 2 || x != std::floor(x) || x > 1e8) throw fail("must be an integer >= 2");
            cfg.points = static_cast<std::size_t>(x);
        } else if (key == "out_csv") {
            cfg.out_csv = value;
        } else if (key == "out_svg") {
            cfg.out_svg = value;
        } else {
            throw fail("unknown key");
        }
    }
    if (cfg.particle_name != "custom" && !particle_keys.empty()) {
        const auto& [k, l] = *particle_keys.begin();
        throw ConfigError(where, l, k, "explicit particle fields require 'particle = custom'");
    }
    cfg.validate(where);
    return cfg;
}

inline RunConfig parse_config_string(const std::string& text, const std::string& where = "config") {
    std::istringstream in(text);
    return parse_config(in, where);
}

inline std::string serialize_config(const RunConfig& cfg) {
    using detail::format_number;
    std::ostringstream os;
    os << "particle = " << cfg.particle_name << "\n";
    if (cfg.particle_name == "custom") {
        os << "particle_mass = " << format_number(cfg.particle.mass) << " MeV\n";
        os << "particle_g_factor = " << format_number(cfg.particle.g_factor) << "\n";
        os << "particle_charge_sign = " << cfg.particle.charge_sign << "\n";
    }
    os << "hz = " << format_number(cfg.hz_oe) << " Oe\n";
    os << "h1 = " << format_number(cfg.h1_oe) << " Oe\n";
    os << "delta = " << format_number(cfg.delta_value) << (cfg.delta_unit == DeltaUnit::mev ? " MeV\n" : " per-meter\n");
    os << "t_max = " << format_number(cfg.t_max_value);
    switch (cfg.t_max_unit) {
        case TimeUnit::relaxation_times: os << " relaxation-times\n"; break;
        case TimeUnit::seconds: os << " s\n"; break;
        case TimeUnit::inverse_mev: os << " inverse-MeV\n"; break;
    }
    os << "points = " << cfg.points << "\n";
    if (!cfg.out_csv.empty()) os << "out_csv = " << cfg.out_csv << "\n";
    if (!cfg.out_svg.empty()) os << "out_svg = " << cfg.out_svg << "\n";
    return os.str();
}

}  // namespace spinrelax
