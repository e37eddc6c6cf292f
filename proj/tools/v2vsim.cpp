// v2vsim command line front end: topology / fuel / route / synth / export
// subcommands driven by a key-value run configuration file.
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "v2vsim/config.hpp"
#include "v2vsim/dynamics.hpp"
#include "v2vsim/fcd.hpp"
#include "v2vsim/fuel.hpp"
#include "v2vsim/geojson.hpp"
#include "v2vsim/io.hpp"
#include "v2vsim/metrics.hpp"
#include "v2vsim/routing.hpp"
#include "v2vsim/topology.hpp"
#include "v2vsim/trace.hpp"

namespace {

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

LogLevel g_log_level = LogLevel::warn;

void init_log_level() {
    const char* env = std::getenv("V2VSIM_LOG");
    if (!env) return;
    std::string v = env;
    if (v == "error")
        g_log_level = LogLevel::error;
    else if (v == "warn")
        g_log_level = LogLevel::warn;
    else if (v == "info")
        g_log_level = LogLevel::info;
    else if (v == "debug")
        g_log_level = LogLevel::debug;
    else
        std::cerr << "[warn] V2VSIM_LOG='" << v << "' not recognized, using 'warn'\n";
}

void log_at(LogLevel level, const char* tag, const std::string& msg) {
    if (level <= g_log_level) std::cerr << "[" << tag << "] " << msg << "\n";
}

void log_info(const std::string& msg) { log_at(LogLevel::info, "info", msg); }
void log_debug(const std::string& msg) { log_at(LogLevel::debug, "debug", msg); }

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw v2vsim::IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

// Snapshot closest in time to the request; earlier one wins a tie.
// Without a request the first snapshot is used.
const v2vsim::Snapshot& pick_snapshot(const v2vsim::Timeline& tl, std::optional<double> time) {
    if (tl.snapshots.empty()) throw v2vsim::InputError("trace has no snapshots");
    if (!time) return tl.snapshots.front();
    const v2vsim::Snapshot* best = &tl.snapshots.front();
    for (const auto& snap : tl.snapshots)
        if (std::abs(snap.time - *time) < std::abs(best->time - *time)) best = &snap;
    return *best;
}

// Per-vehicle speed series over the vehicle's contiguous presence window.
std::vector<double> vehicle_speed_series(const v2vsim::Timeline& tl, const std::string& id) {
    std::vector<double> speeds;
    std::size_t first = tl.snapshots.size();
    for (std::size_t i = 0; i < tl.snapshots.size(); ++i) {
        const auto* state = tl.snapshots[i].find(id);
        if (state) {
            if (first == tl.snapshots.size()) first = i;
            if (speeds.size() != i - first)
                throw v2vsim::InputError("vehicle '" + id + "' is absent at t=" +
                                         v2vsim::detail::format_double(tl.snapshots[i - 1].time) +
                                         " but reappears later; need a contiguous series");
            speeds.push_back(state->speed);
        }
    }
    if (speeds.empty()) throw v2vsim::LookupError("vehicle '" + id + "' not found in the trace");
    return speeds;
}

std::string source_name(v2vsim::TraceSource s) {
    switch (s) {
        case v2vsim::TraceSource::fcd: return "fcd";
        case v2vsim::TraceSource::csv: return "csv";
        default: return "synth";
    }
}

nlohmann::json run_manifest(const char* command, const v2vsim::RunConfig& cfg,
                            const v2vsim::Timeline& tl) {
    std::set<std::string> ids;
    for (const auto& snap : tl.snapshots)
        for (const auto& st : snap.states) ids.insert(st.id);
    return nlohmann::json{
        {"command", command},
        {"degree_cap", cfg.topology.degree_cap},
        {"r_max_m", cfg.topology.r_max},
        {"r_p_m", cfg.topology.r_p},
        {"seed", cfg.seed},
        {"snapshots", tl.snapshots.size()},
        {"source", source_name(cfg.source)},
        {"step_s", tl.step},
        {"vehicles", ids.size()},
    };
}

std::filesystem::path ensure_out_dir(const v2vsim::RunConfig& cfg) {
    std::filesystem::path dir = cfg.out_dir;
    std::filesystem::create_directories(dir);
    return dir;
}

int cmd_topology(const v2vsim::RunConfig& cfg) {
    auto tl = v2vsim::load_timeline(cfg);
    log_info("trace loaded: " + std::to_string(tl.snapshots.size()) + " snapshots");
    auto forests = v2vsim::evolve(tl, cfg.topology);
    auto metrics = v2vsim::summarize(forests, cfg.topology);
    auto dir = ensure_out_dir(cfg);

    auto jsonl = open_output(dir / "forests.jsonl");
    v2vsim::write_forest_jsonl(forests, jsonl);
    auto csv = open_output(dir / "metrics.csv");
    v2vsim::write_metrics_csv(metrics, csv);
    auto manifest = open_output(dir / "run.json");
    manifest << run_manifest("topology", cfg, tl).dump(2) << "\n";

    nlohmann::json summary{{"command", "topology"}, {"snapshots", forests.size()}};
    if (metrics.aggregates) {
        summary["mean_components"] = metrics.aggregates->mean_components;
        summary["mean_reachability"] = metrics.aggregates->mean_reachability;
        summary["max_long_links"] = metrics.aggregates->max_long_links;
    }
    std::cout << summary.dump() << "\n";
    return 0;
}

int cmd_synth(const v2vsim::RunConfig& cfg) {
    if (cfg.source != v2vsim::TraceSource::synth)
        throw v2vsim::ConfigError("synth command needs synth_* keys as the trace source");
    auto tl = v2vsim::synth_trace(cfg.synth, cfg.seed);
    auto dir = ensure_out_dir(cfg);
    auto xml = open_output(dir / "trace.xml");
    v2vsim::write_fcd(tl, xml);
    auto manifest = open_output(dir / "run.json");
    manifest << run_manifest("synth", cfg, tl).dump(2) << "\n";
    std::cout << nlohmann::json{{"command", "synth"}, {"snapshots", tl.snapshots.size()}}.dump()
              << "\n";
    return 0;
}

int cmd_fuel(const v2vsim::RunConfig& cfg, const std::string& vehicle) {
    if (cfg.params_path.empty()) throw v2vsim::ConfigError("fuel command needs 'params'");
    if (cfg.fuel_map_path.empty()) throw v2vsim::ConfigError("fuel command needs 'fuel_map'");
    auto params = v2vsim::load_vehicle_params(cfg.params_path);
    auto profile = cfg.profile_path.empty() ? v2vsim::RoadProfile::flat()
                                            : v2vsim::load_road_profile(cfg.profile_path);
    auto map = v2vsim::load_fuel_map(cfg.fuel_map_path);

    std::vector<double> speeds;
    double dt = cfg.dt;
    nlohmann::json out;
    if (!vehicle.empty()) {
        auto tl = v2vsim::load_timeline(cfg);
        speeds = vehicle_speed_series(tl, vehicle);
        if (dt <= 0) dt = tl.step;
        out["vehicle"] = vehicle;
    } else if (!cfg.speeds_path.empty()) {
        auto in = v2vsim::detail::open_input(cfg.speeds_path);
        double inferred = 0;
        speeds = v2vsim::load_speed_csv(in, inferred);
        if (dt <= 0) dt = inferred;
    } else {
        throw v2vsim::ConfigError("fuel command needs --vehicle or a 'speeds_csv' input");
    }
    log_debug("fuel series: " + std::to_string(speeds.size()) + " samples, dt=" +
              v2vsim::detail::format_double(dt));

    auto fuel = v2vsim::total_fuel(params, profile, map, speeds, dt);
    auto dir = ensure_out_dir(cfg);
    auto csv = open_output(dir / "fuel_trace.csv");
    v2vsim::write_fuel_csv(fuel, speeds, dt, csv);

    out["total_g"] = fuel.total_g;
    out["duration_s"] = dt * static_cast<double>(speeds.size() - 1);
    out["steps"] = speeds.size() - 1;
    out["clamped_steps"] = fuel.clamped_steps;
    std::cout << out.dump() << "\n";
    return 0;
}

int cmd_route(const v2vsim::RunConfig& cfg, std::optional<double> time, const std::string& src,
              const std::string& dst) {
    auto tl = v2vsim::load_timeline(cfg);
    const auto& snap = pick_snapshot(tl, time);
    auto forest = v2vsim::snapshot_forest(snap, cfg.topology);
    auto result = v2vsim::route(forest, src, dst);

    nlohmann::json out{
        {"time", snap.time},
        {"src", src},
        {"dst", dst},
        {"status", result.status == v2vsim::RouteStatus::delivered ? "delivered" : "unreachable"},
        {"hops", result.hops},
        {"path", result.path},
        {"path_length_m", result.path_length},
    };
    std::cout << out.dump() << "\n";
    return 0;
}

int cmd_export(const v2vsim::RunConfig& cfg, std::optional<double> time) {
    auto tl = v2vsim::load_timeline(cfg);
    const auto& snap = pick_snapshot(tl, time);
    auto forest = v2vsim::snapshot_forest(snap, cfg.topology);
    auto dir = ensure_out_dir(cfg);
    auto out = open_output(dir / "snapshot.geojson");
    v2vsim::export_geojson(snap, forest, out, cfg.crs);
    std::cout << nlohmann::json{{"command", "export"},
                                {"time", snap.time},
                                {"vehicles", snap.states.size()},
                                {"edges", forest.edges.size()}}
                     .dump()
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    init_log_level();

    CLI::App app{"V2V topology and fuel consumption simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed_flag;
    std::optional<std::string> out_flag;
    std::optional<double> time_flag;
    std::string src, dst, vehicle;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "run configuration file")->required();
        sub->add_option("--seed", seed_flag, "override the configured seed");
        sub->add_option("--out", out_flag, "override the configured output directory");
    };

    auto* topology = app.add_subcommand("topology", "build the forest sequence and metrics");
    add_common(topology);
    auto* fuel = app.add_subcommand("fuel", "compute fuel consumption for a speed series");
    add_common(fuel);
    fuel->add_option("--vehicle", vehicle, "vehicle id whose trace speeds are used");
    auto* route = app.add_subcommand("route", "query a path between two vehicles");
    add_common(route);
    route->add_option("--time", time_flag, "snapshot time, nearest wins (default: first)");
    route->add_option("--src", src, "source vehicle id")->required();
    route->add_option("--dst", dst, "destination vehicle id")->required();
    auto* synth = app.add_subcommand("synth", "generate a synthetic trace");
    add_common(synth);
    auto* exp = app.add_subcommand("export", "write one snapshot as GeoJSON");
    add_common(exp);
    exp->add_option("--time", time_flag, "snapshot time, nearest wins (default: first)");

    CLI11_PARSE(app, argc, argv);

    try {
        auto cfg = v2vsim::load_run_config(config_path);
        if (seed_flag) cfg.seed = *seed_flag;
        if (out_flag) cfg.out_dir = *out_flag;

        if (app.got_subcommand(topology)) return cmd_topology(cfg);
        if (app.got_subcommand(fuel)) return cmd_fuel(cfg, vehicle);
        if (app.got_subcommand(route)) return cmd_route(cfg, time_flag, src, dst);
        if (app.got_subcommand(synth)) return cmd_synth(cfg);
        if (app.got_subcommand(exp)) return cmd_export(cfg, time_flag);
    } catch (const std::exception& e) {
        std::cerr << "v2vsim: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
