// v2vsim/trace.hpp - vehicle trace model: per-snapshot vehicle states over a sampled timeline
#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "v2vsim/error.hpp"

namespace v2vsim {

enum class VehicleClass { bus, private_car, other };

inline std::string_view to_string(VehicleClass c) {
    switch (c) {
        case VehicleClass::bus: return "bus";
        case VehicleClass::private_car: return "private";
        case VehicleClass::other: return "other";
    }
    return "private";
}

inline VehicleClass vehicle_class_from_string(std::string_view s) {
    if (s == "bus") return VehicleClass::bus;
    if (s == "private") return VehicleClass::private_car;
    if (s == "other") return VehicleClass::other;
    throw ConfigError("unknown vehicle class '" + std::string(s) + "' (want bus|private|other)");
}

// One vehicle sample. Positions are planar meters in the trace's network
// projection; no geodetic conversion happens anywhere in the library.
struct VehicleState {
    std::string id;
    double x = 0.0;      // m
    double y = 0.0;      // m
    double speed = 0.0;  // m/s, >= 0
    VehicleClass vclass = VehicleClass::private_car;

    bool operator==(const VehicleState&) const = default;
};

// All vehicles present at one sampled instant. Ids are unique per snapshot.
struct Snapshot {
    double time = 0.0;  // s since trace start
    std::vector<VehicleState> states;

    const VehicleState* find(std::string_view id) const {
        for (const auto& s : states)
            if (s.id == id) return &s;
        return nullptr;
    }

    bool operator==(const Snapshot&) const = default;
};

// Time-ordered snapshot sequence. `step` is the nominal sampling interval;
// irregular gaps are tolerated and preserved in the snapshot times.
struct Timeline {
    std::vector<Snapshot> snapshots;
    double step = 1.0;  // s

    bool operator==(const Timeline&) const = default;
};

// Median inter-snapshot gap; 1.0 when fewer than two snapshots exist.
inline double median_step(const std::vector<Snapshot>& snapshots) {
    if (snapshots.size() < 2) return 1.0;
    std::vector<double> gaps;
    gaps.reserve(snapshots.size() - 1);
    for (std::size_t i = 1; i < snapshots.size(); ++i)
        gaps.push_back(snapshots[i].time - snapshots[i - 1].time);
    std::sort(gaps.begin(), gaps.end());
    std::size_t n = gaps.size();
    return n % 2 == 1 ? gaps[n / 2] : 0.5 * (gaps[n / 2 - 1] + gaps[n / 2]);
}

// Maps an FCD `type` attribute to a vehicle class: first rule whose needle is
// a substring of the type wins, otherwise the type is treated as private
// background traffic.
struct ClassRule {
    std::string needle;
    VehicleClass vclass;
};

using ClassMap = std::vector<ClassRule>;

inline const ClassMap& default_class_map() {
    static const ClassMap map = {
        {"bus", VehicleClass::bus},
        {"other", VehicleClass::other},
    };
    return map;
}

inline VehicleClass classify(std::string_view type_attr, const ClassMap& map = default_class_map()) {
    for (const auto& rule : map)
        if (type_attr.find(rule.needle) != std::string_view::npos) return rule.vclass;
    return VehicleClass::private_car;
}

// Keeps only states whose class is in `classes`. Snapshot times are
// unchanged; snapshots that end up empty are retained.
inline Timeline filter_class(const Timeline& timeline, const std::set<VehicleClass>& classes) {
    Timeline out;
    out.step = timeline.step;
    out.snapshots.reserve(timeline.snapshots.size());
    for (const auto& snap : timeline.snapshots) {
        Snapshot filtered;
        filtered.time = snap.time;
        for (const auto& s : snap.states)
            if (classes.contains(s.vclass)) filtered.states.push_back(s);
        out.snapshots.push_back(std::move(filtered));
    }
    return out;
}

}  // namespace v2vsim
