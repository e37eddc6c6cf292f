// v2vsim/geojson.hpp - GeoJSON snapshot export: vehicles as points, forest links as line strings
#pragma once

#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "v2vsim/error.hpp"
#include "v2vsim/topology.hpp"
#include "v2vsim/trace.hpp"

namespace v2vsim {

// FeatureCollection with one Point per vehicle and one LineString per forest
// edge. Coordinates are the planar trace coordinates, carried verbatim; when
// a projection string is known it is attached as a top-level `crs_note`.
inline nlohmann::json geojson_snapshot(const Snapshot& snapshot, const SpanningForest& forest,
                                       const std::optional<std::string>& crs_note = std::nullopt) {
    for (const auto& id : forest.vertices)
        if (!snapshot.find(id))
            throw ConsistencyError("forest vertex '" + id + "' is not in the snapshot");

    nlohmann::json features = nlohmann::json::array();
    for (const auto& s : snapshot.states) {
        features.push_back({
            {"type", "Feature"},
            {"geometry", {{"type", "Point"}, {"coordinates", {s.x, s.y}}}},
            {"properties",
             {{"id", s.id}, {"class", std::string(to_string(s.vclass))}, {"speed", s.speed}}},
        });
    }
    for (const auto& e : forest.edges) {
        const VehicleState* u = snapshot.find(e.u);
        const VehicleState* v = snapshot.find(e.v);
        if (!u || !v)
            throw ConsistencyError("edge endpoint '" + (u ? e.v : e.u) + "' is not in the snapshot");
        features.push_back({
            {"type", "Feature"},
            {"geometry",
             {{"type", "LineString"}, {"coordinates", {{u->x, u->y}, {v->x, v->y}}}}},
            {"properties", {{"length_m", e.length}, {"kind", std::string(to_string(e.kind))}}},
        });
    }

    nlohmann::json doc{{"type", "FeatureCollection"}, {"features", features}};
    if (crs_note) doc["crs_note"] = *crs_note;
    return doc;
}

inline void export_geojson(const Snapshot& snapshot, const SpanningForest& forest, std::ostream& out,
                           const std::optional<std::string>& crs_note = std::nullopt) {
    out << geojson_snapshot(snapshot, forest, crs_note).dump(2) << "\n";
    if (!out) throw IoError("GeoJSON: write failed");
}

}  // namespace v2vsim
