// v2vsim/io.hpp - loaders for the documented input files: key-value configs,
// vehicle parameters, road profiles, fuel maps and standalone speed traces
#pragma once

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "v2vsim/detail/text.hpp"
#include "v2vsim/dynamics.hpp"
#include "v2vsim/error.hpp"
#include "v2vsim/fuel.hpp"
#include "v2vsim/synth.hpp"

namespace v2vsim {

// `key = value` lines; blank lines and `#` comments are ignored.
// Later occurrences of a key win.
inline std::map<std::string, std::string> read_key_values(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string_view::npos)
            throw ParseError("expected 'key = value', got '" + std::string(t) + "'", line_no);
        auto key = detail::trim(t.substr(0, eq));
        auto value = detail::trim(t.substr(eq + 1));
        if (key.empty()) throw ParseError("empty key", line_no);
        kv[std::string(key)] = std::string(value);
    }
    return kv;
}

namespace detail {

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return in;
}

inline const std::string& require_key(const std::map<std::string, std::string>& kv,
                                      const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError("missing required key '" + key + "'");
    return it->second;
}

}  // namespace detail

// Vehicle parameter file, key-value form. The gear table is
//   gears = <min_speed>:<ratio>[, <min_speed>:<ratio> ...]
// and defaults to a single 1:1 gear.
inline VehicleParams load_vehicle_params(std::istream& in) {
    auto kv = read_key_values(in);
    VehicleParams p;
    p.mass_kg = detail::parse_double(detail::require_key(kv, "mass_kg"), "mass_kg");
    p.wheel_radius_m = detail::parse_double(detail::require_key(kv, "wheel_radius_m"), "wheel_radius_m");
    if (auto it = kv.find("rotating_mass_kg"); it != kv.end())
        p.rotating_mass_kg = detail::parse_double(it->second, "rotating_mass_kg");
    if (auto it = kv.find("drag_coeff"); it != kv.end())
        p.drag_coeff = detail::parse_double(it->second, "drag_coeff");
    if (auto it = kv.find("rolling_coeff"); it != kv.end())
        p.rolling_coeff = detail::parse_double(it->second, "rolling_coeff");
    if (auto it = kv.find("gravity"); it != kv.end())
        p.gravity = detail::parse_double(it->second, "gravity");
    if (auto it = kv.find("gearbox_eff"); it != kv.end())
        p.gearbox_eff = detail::parse_double(it->second, "gearbox_eff");
    if (auto it = kv.find("gears"); it != kv.end()) {
        p.gears.clear();
        for (auto part : detail::split(it->second, ',')) {
            auto fields = detail::split(detail::trim(part), ':');
            if (fields.size() != 2)
                throw ConfigError("gears: expected '<min_speed>:<ratio>', got '" + std::string(part) + "'");
            p.gears.push_back(GearEntry{detail::parse_double(fields[0], "gear min_speed"),
                                        detail::parse_double(fields[1], "gear ratio")});
        }
    }
    p.validate();
    return p;
}

inline VehicleParams load_vehicle_params(const std::string& path) {
    auto in = detail::open_input(path);
    return load_vehicle_params(in);
}

// Road profile CSV: header `distance_m,alpha_rad`, one sample per row.
inline RoadProfile load_road_profile(std::istream& in) {
    RoadProfile profile;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        auto t = detail::trim(line);
        if (t.empty()) continue;
        if (!header_seen) {
            if (t != "distance_m,alpha_rad")
                throw ParseError("bad profile header (want 'distance_m,alpha_rad')", line_no);
            header_seen = true;
            continue;
        }
        auto f = detail::split(t, ',');
        if (f.size() != 2) throw ParseError("expected 2 fields", line_no);
        profile.samples.push_back(RoadProfile::Sample{
            detail::parse_double(f[0], "column 'distance_m'", line_no),
            detail::parse_double(f[1], "column 'alpha_rad'", line_no)});
    }
    profile.validate();
    return profile;
}

inline RoadProfile load_road_profile(const std::string& path) {
    auto in = detail::open_input(path);
    return load_road_profile(in);
}

// Fuel map CSV: first row is the omega axis (rad/s) with an ignored first
// cell, each following row is a torque value (N*m) followed by rates (g/s).
inline FuelMap load_fuel_map(std::istream& in) {
    FuelMap map;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto t = detail::trim(line);
        if (t.empty()) continue;
        auto f = detail::split(t, ',');
        if (map.omega_axis.empty()) {
            if (f.size() < 2) throw ParseError("fuel map: omega axis row needs at least 2 cells", line_no);
            for (std::size_t i = 1; i < f.size(); ++i)
                map.omega_axis.push_back(detail::parse_double(f[i], "omega axis", line_no));
            continue;
        }
        if (f.size() != map.omega_axis.size() + 1)
            throw ParseError("fuel map: row width does not match omega axis", line_no);
        map.torque_axis.push_back(detail::parse_double(f[0], "torque axis", line_no));
        for (std::size_t i = 1; i < f.size(); ++i)
            map.rate.push_back(detail::parse_double(f[i], "fuel rate", line_no));
    }
    map.validate();
    return map;
}

inline FuelMap load_fuel_map(const std::string& path) {
    auto in = detail::open_input(path);
    return load_fuel_map(in);
}

// Standalone speed trace CSV: header `time,speed`. Returns the speeds and
// reports the median sampling interval through `dt_out`.
inline std::vector<double> load_speed_csv(std::istream& in, double& dt_out) {
    std::vector<double> times;
    std::vector<double> speeds;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        auto t = detail::trim(line);
        if (t.empty()) continue;
        if (!header_seen) {
            if (t != "time,speed")
                throw ParseError("bad speed trace header (want 'time,speed')", line_no);
            header_seen = true;
            continue;
        }
        auto f = detail::split(t, ',');
        if (f.size() != 2) throw ParseError("expected 2 fields", line_no);
        double time = detail::parse_double(f[0], "column 'time'", line_no);
        if (!times.empty() && time <= times.back())
            throw ParseError("times not strictly increasing", line_no);
        times.push_back(time);
        speeds.push_back(detail::parse_double(f[1], "column 'speed'", line_no));
    }
    if (times.size() < 2) throw ParseError("speed trace needs at least 2 samples");
    std::vector<double> gaps;
    gaps.reserve(times.size() - 1);
    for (std::size_t i = 1; i < times.size(); ++i) gaps.push_back(times[i] - times[i - 1]);
    std::sort(gaps.begin(), gaps.end());
    dt_out = gaps.size() % 2 == 1 ? gaps[gaps.size() / 2]
                                  : 0.5 * (gaps[gaps.size() / 2 - 1] + gaps[gaps.size() / 2]);
    return speeds;
}

// Synth generator settings from key-value form, `synth_` prefix.
inline SynthConfig load_synth_config(const std::map<std::string, std::string>& kv) {
    SynthConfig cfg;
    auto num = [&](const char* key, double& slot) {
        if (auto it = kv.find(key); it != kv.end()) slot = detail::parse_double(it->second, key);
    };
    if (auto it = kv.find("synth_vehicles"); it != kv.end())
        cfg.vehicle_count = static_cast<int>(detail::parse_int(it->second, "synth_vehicles"));
    if (auto it = kv.find("synth_buses"); it != kv.end())
        cfg.bus_count = static_cast<int>(detail::parse_int(it->second, "synth_buses"));
    num("synth_duration_s", cfg.duration_s);
    num("synth_step_s", cfg.step_s);
    num("synth_min_x", cfg.min_x);
    num("synth_min_y", cfg.min_y);
    num("synth_max_x", cfg.max_x);
    num("synth_max_y", cfg.max_y);
    num("synth_min_speed", cfg.min_speed);
    num("synth_max_speed", cfg.max_speed);
    cfg.validate();
    return cfg;
}

}  // namespace v2vsim
