// v2vsim/metrics.hpp - timeline-level topology aggregation and CSV / JSON-lines export
#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include <json.hpp>

#include "v2vsim/detail/text.hpp"
#include "v2vsim/fuel.hpp"
#include "v2vsim/routing.hpp"
#include "v2vsim/topology.hpp"

namespace v2vsim {

struct SnapshotMetrics {
    double time = 0.0;
    int vehicles = 0;
    int edges = 0;
    int components = 0;
    int long_links = 0;
    double reachability = 1.0;
    std::vector<int> hist;  // link-length histogram over [0, r_max]
};

struct RunAggregates {
    double mean_vehicles = 0.0, mean_edges = 0.0, mean_components = 0.0;
    double mean_long_links = 0.0, mean_reachability = 0.0;
    int max_vehicles = 0, max_edges = 0, max_components = 0, max_long_links = 0;
    double max_reachability = 0.0;
};

struct TopologyMetrics {
    int bin_count = 10;
    double bin_width = 0.0;  // m
    std::vector<SnapshotMetrics> rows;
    std::optional<RunAggregates> aggregates;  // absent for an empty run
};

// Deterministic per-snapshot aggregation plus whole-run means and maxima.
inline TopologyMetrics summarize(std::span<const TimedForest> forests, const TopologyConfig& cfg,
                                 int bin_count = 10) {
    cfg.validate();
    if (bin_count < 1) throw ConfigError("metrics: bin count must be >= 1");

    TopologyMetrics m;
    m.bin_count = bin_count;
    m.bin_width = cfg.r_max / bin_count;
    m.rows.reserve(forests.size());
    for (const auto& tf : forests) {
        SnapshotMetrics row;
        row.time = tf.time;
        row.vehicles = static_cast<int>(tf.forest.vertices.size());
        row.edges = static_cast<int>(tf.forest.edges.size());
        row.components = static_cast<int>(tf.forest.components.size());
        row.reachability = reachability_ratio(tf.forest);
        row.hist.assign(static_cast<std::size_t>(bin_count), 0);
        for (const auto& e : tf.forest.edges) {
            if (e.kind == LinkKind::long_range) ++row.long_links;
            auto bin = static_cast<std::size_t>(e.length / cfg.r_max * bin_count);
            if (bin >= static_cast<std::size_t>(bin_count)) bin = static_cast<std::size_t>(bin_count) - 1;
            ++row.hist[bin];
        }
        m.rows.push_back(std::move(row));
    }

    if (!m.rows.empty()) {
        RunAggregates agg;
        for (const auto& r : m.rows) {
            agg.mean_vehicles += r.vehicles;
            agg.mean_edges += r.edges;
            agg.mean_components += r.components;
            agg.mean_long_links += r.long_links;
            agg.mean_reachability += r.reachability;
            agg.max_vehicles = std::max(agg.max_vehicles, r.vehicles);
            agg.max_edges = std::max(agg.max_edges, r.edges);
            agg.max_components = std::max(agg.max_components, r.components);
            agg.max_long_links = std::max(agg.max_long_links, r.long_links);
            agg.max_reachability = std::max(agg.max_reachability, r.reachability);
        }
        double n = static_cast<double>(m.rows.size());
        agg.mean_vehicles /= n;
        agg.mean_edges /= n;
        agg.mean_components /= n;
        agg.mean_long_links /= n;
        agg.mean_reachability /= n;
        m.aggregates = agg;
    }
    return m;
}

// Header plus one row per snapshot; numbers keep full round-trip precision
// so identical inputs produce byte-identical files.
inline void write_metrics_csv(const TopologyMetrics& m, std::ostream& out) {
    out << "time,vehicles,edges,components,long_links,reachability";
    for (int b = 0; b < m.bin_count; ++b) out << ",len_bin_" << b;
    out << "\n";
    for (const auto& r : m.rows) {
        out << detail::format_double(r.time) << ',' << r.vehicles << ',' << r.edges << ','
            << r.components << ',' << r.long_links << ',' << detail::format_double(r.reachability);
        for (int v : r.hist) out << ',' << v;
        out << "\n";
        if (!out) throw IoError("metrics CSV: write failed");
    }
}

// One row per speed sample of a fuel run.
inline void write_fuel_csv(const FuelResult& fuel, std::span<const double> speeds, double dt,
                           std::ostream& out) {
    out << "time,speed_mps,traction_n,braking_n,torque_nm,omega_rad_s,rate_g_per_s,clamped\n";
    for (std::size_t i = 0; i < fuel.rate_trace.size(); ++i) {
        out << detail::format_double(static_cast<double>(i) * dt) << ','
            << detail::format_double(speeds[i]) << ','
            << detail::format_double(fuel.forces[i].traction_n) << ','
            << detail::format_double(fuel.forces[i].braking_n) << ','
            << detail::format_double(fuel.points[i].torque_nm) << ','
            << detail::format_double(fuel.points[i].omega_rad_s) << ','
            << detail::format_double(fuel.rate_trace[i]) << ',' << int(fuel.clamped[i]) << "\n";
        if (!out) throw IoError("fuel CSV: write failed");
    }
}

inline nlohmann::json forest_to_json(const TimedForest& tf) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : tf.forest.edges) {
        edges.push_back({{"u", e.u},
                         {"v", e.v},
                         {"length_m", e.length},
                         {"kind", std::string(to_string(e.kind))}});
    }
    return nlohmann::json{{"time", tf.time}, {"edges", edges}, {"components", tf.forest.components}};
}

// One JSON object per snapshot, one per line.
inline void write_forest_jsonl(std::span<const TimedForest> forests, std::ostream& out) {
    for (const auto& tf : forests) {
        out << forest_to_json(tf).dump() << "\n";
        if (!out) throw IoError("forest JSON lines: write failed");
    }
}

}  // namespace v2vsim
