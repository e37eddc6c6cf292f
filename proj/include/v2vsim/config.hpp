// v2vsim/config.hpp - run configuration: one key-value file selecting the
// trace source, topology settings, powertrain inputs and output directory
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "v2vsim/error.hpp"
#include "v2vsim/fcd.hpp"
#include "v2vsim/io.hpp"
#include "v2vsim/synth.hpp"
#include "v2vsim/topology.hpp"
#include "v2vsim/trace.hpp"

namespace v2vsim {

enum class TraceSource { fcd, csv, synth };

// Everything a run needs. Paths are stored already resolved against the
// directory of the config file they came from.
struct RunConfig {
    TraceSource source = TraceSource::synth;
    std::string trace_path;  // fcd / csv sources
    SynthConfig synth;       // synth source
    std::uint64_t seed = 1;

    std::set<VehicleClass> class_filter;  // empty: keep everything

    TopologyConfig topology;

    std::string params_path;
    std::string profile_path;  // optional, flat road when empty
    std::string fuel_map_path;
    std::string speeds_path;  // optional standalone speed trace

    std::string out_dir = "out";
    double dt = 0;  // 0: infer from the trace spacing
    std::optional<std::string> crs;
};

namespace detail {

inline std::set<VehicleClass> parse_class_filter(std::string_view text) {
    std::set<VehicleClass> filter;
    for (auto part : split(text, ',')) {
        auto name = trim(part);
        if (name.empty()) continue;
        if (name == "bus")
            filter.insert(VehicleClass::bus);
        else if (name == "private")
            filter.insert(VehicleClass::private_car);
        else if (name == "other")
            filter.insert(VehicleClass::other);
        else
            throw ConfigError("unknown vehicle class '" + std::string(name) +
                              "' (want bus, private or other)");
    }
    return filter;
}

inline std::string resolve_path(const std::filesystem::path& base, std::string_view value) {
    std::filesystem::path p{std::string(value)};
    if (p.is_absolute() || base.empty()) return p.string();
    return (base / p).lexically_normal().string();
}

}  // namespace detail

// Builds a RunConfig from already-parsed key-value pairs. `base_dir` is the
// directory relative paths are resolved against (the config file's home).
inline RunConfig make_run_config(const std::map<std::string, std::string>& kv,
                                 const std::filesystem::path& base_dir = {}) {
    RunConfig cfg;

    int sources = 0;
    if (auto it = kv.find("trace_fcd"); it != kv.end()) {
        cfg.source = TraceSource::fcd;
        cfg.trace_path = detail::resolve_path(base_dir, it->second);
        ++sources;
    }
    if (auto it = kv.find("trace_csv"); it != kv.end()) {
        cfg.source = TraceSource::csv;
        cfg.trace_path = detail::resolve_path(base_dir, it->second);
        ++sources;
    }
    bool any_synth = false;
    for (const auto& [key, value] : kv)
        if (key.rfind("synth_", 0) == 0) any_synth = true;
    if (any_synth) {
        cfg.source = TraceSource::synth;
        cfg.synth = load_synth_config(kv);
        ++sources;
    }
    if (sources == 0) throw ConfigError("no trace source (want trace_fcd, trace_csv or synth_* keys)");
    if (sources > 1) throw ConfigError("multiple trace sources configured; pick one");

    if (auto it = kv.find("seed"); it != kv.end())
        cfg.seed = static_cast<std::uint64_t>(detail::parse_int(it->second, "seed"));
    if (auto it = kv.find("classes"); it != kv.end())
        cfg.class_filter = detail::parse_class_filter(it->second);

    if (auto it = kv.find("r_p_m"); it != kv.end())
        cfg.topology.r_p = detail::parse_double(it->second, "r_p_m");
    if (auto it = kv.find("r_max_m"); it != kv.end())
        cfg.topology.r_max = detail::parse_double(it->second, "r_max_m");
    if (auto it = kv.find("degree_cap"); it != kv.end())
        cfg.topology.degree_cap = static_cast<int>(detail::parse_int(it->second, "degree_cap"));
    cfg.topology.validate();

    if (auto it = kv.find("params"); it != kv.end())
        cfg.params_path = detail::resolve_path(base_dir, it->second);
    if (auto it = kv.find("profile"); it != kv.end())
        cfg.profile_path = detail::resolve_path(base_dir, it->second);
    if (auto it = kv.find("fuel_map"); it != kv.end())
        cfg.fuel_map_path = detail::resolve_path(base_dir, it->second);
    if (auto it = kv.find("speeds_csv"); it != kv.end())
        cfg.speeds_path = detail::resolve_path(base_dir, it->second);

    if (auto it = kv.find("out_dir"); it != kv.end())
        cfg.out_dir = detail::resolve_path(base_dir, it->second);
    if (auto it = kv.find("dt"); it != kv.end()) {
        cfg.dt = detail::parse_double(it->second, "dt");
        if (cfg.dt < 0) throw ConfigError("dt must be >= 0 (0 means infer)");
    }
    if (auto it = kv.find("crs"); it != kv.end()) cfg.crs = it->second;

    static const std::set<std::string> known = {
        "trace_fcd", "trace_csv", "seed", "classes", "r_p_m", "r_max_m", "degree_cap",
        "params", "profile", "fuel_map", "speeds_csv", "out_dir", "dt", "crs"};
    for (const auto& [key, value] : kv) {
        if (key.rfind("synth_", 0) == 0) continue;
        if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
    }
    return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
    auto in = detail::open_input(path);
    auto kv = read_key_values(in);
    return make_run_config(kv, std::filesystem::path(path).parent_path());
}

// Materializes the configured trace: parse the file or generate the synthetic
// walk, then apply the class filter if one is set.
inline Timeline load_timeline(const RunConfig& cfg) {
    Timeline tl;
    switch (cfg.source) {
        case TraceSource::fcd: {
            std::ifstream in(cfg.trace_path);
            if (!in) throw IoError("cannot open trace '" + cfg.trace_path + "'");
            tl = parse_fcd(in);
            break;
        }
        case TraceSource::csv: {
            std::ifstream in(cfg.trace_path);
            if (!in) throw IoError("cannot open trace '" + cfg.trace_path + "'");
            tl = parse_trace_csv(in);
            break;
        }
        case TraceSource::synth:
            tl = synth_trace(cfg.synth, cfg.seed);
            break;
    }
    if (!cfg.class_filter.empty()) tl = filter_class(tl, cfg.class_filter);
    return tl;
}

}  // namespace v2vsim
