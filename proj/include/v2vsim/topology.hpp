// v2vsim/topology.hpp - per-snapshot V2V candidate links and the degree-capped spanning forest
#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "v2vsim/error.hpp"
#include "v2vsim/trace.hpp"

namespace v2vsim {

// Link classification: short links lie within the proximity inclusion radius
// R_p, long links are the sparingly-allowed ones out to the hard range R_max.
enum class LinkKind { short_range, long_range };

inline std::string_view to_string(LinkKind k) {
    return k == LinkKind::short_range ? "short" : "long";
}

struct TopologyConfig {
    double r_p = 300.0;     // m, proximity inclusion threshold
    double r_max = 1000.0;  // m, hard radio range
    int degree_cap = 4;     // max links per vehicle

    void validate() const {
        if (!(r_p > 0.0)) throw ConfigError("topology: r_p must be positive");
        if (!(r_max >= r_p)) throw ConfigError("topology: need r_p <= r_max");
        if (degree_cap < 1) throw ConfigError("topology: degree cap must be >= 1");
    }
};

// Symmetric pairwise Euclidean distances over the snapshot's vehicles,
// with ids in lexicographic order.
struct DistanceMatrix {
    std::vector<std::string> ids;
    std::vector<double> d;  // row-major ids.size() x ids.size()

    std::size_t size() const { return ids.size(); }
    double at(std::size_t i, std::size_t j) const { return d[i * ids.size() + j]; }
};

inline DistanceMatrix distance_matrix(const Snapshot& snapshot) {
    DistanceMatrix m;
    std::vector<const VehicleState*> states;
    states.reserve(snapshot.states.size());
    for (const auto& s : snapshot.states) states.push_back(&s);
    std::sort(states.begin(), states.end(),
              [](const VehicleState* a, const VehicleState* b) { return a->id < b->id; });
    for (std::size_t i = 1; i < states.size(); ++i)
        if (states[i]->id == states[i - 1]->id)
            throw InputError("duplicate vehicle id '" + states[i]->id + "' in snapshot");

    std::size_t n = states.size();
    m.ids.reserve(n);
    for (const auto* s : states) m.ids.push_back(s->id);
    m.d.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double dist = std::hypot(states[i]->x - states[j]->x, states[i]->y - states[j]->y);
            m.d[i * n + j] = dist;
            m.d[j * n + i] = dist;
        }
    }
    return m;
}

// Feasible V2V link between two distinct vehicles; u < v lexicographically.
struct CandidateEdge {
    std::string u;
    std::string v;
    double length = 0.0;  // m
    LinkKind kind = LinkKind::short_range;

    bool operator==(const CandidateEdge&) const = default;
};

// Greedy selection order: length ascending, ties broken by the (u, v) pair.
inline bool edge_order_less(const CandidateEdge& a, const CandidateEdge& b) {
    if (a.length != b.length) return a.length < b.length;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
}

// All vehicle pairs within radio range, already in selection order. Distinct
// vehicles at identical positions yield a length-0 short edge; there are no
// self edges.
inline std::vector<CandidateEdge> candidate_links(const DistanceMatrix& m, const TopologyConfig& cfg) {
    cfg.validate();
    std::vector<CandidateEdge> edges;
    std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double len = m.at(i, j);
            if (len > cfg.r_max) continue;
            edges.push_back(CandidateEdge{
                m.ids[i], m.ids[j], len,
                len <= cfg.r_p ? LinkKind::short_range : LinkKind::long_range});
        }
    }
    std::sort(edges.begin(), edges.end(), edge_order_less);
    return edges;
}

namespace detail {

struct UnionFind {
    std::vector<int> parent;
    std::vector<int> rank;

    explicit UnionFind(std::size_t n) : parent(n), rank(n, 0) {
        std::iota(parent.begin(), parent.end(), 0);
    }

    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    // false if already in the same set
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (rank[a] < rank[b]) std::swap(a, b);
        parent[b] = a;
        if (rank[a] == rank[b]) ++rank[a];
        return true;
    }
};

}  // namespace detail

// Acyclic, degree-capped link structure spanning each reachable cluster.
// Vertices and components are sorted for deterministic output.
struct SpanningForest {
    std::vector<std::string> vertices;                 // lexicographic
    std::vector<CandidateEdge> edges;                  // in selection order
    std::vector<std::vector<std::string>> components;  // each sorted, ordered by first id

    bool has_vertex(std::string_view id) const {
        return std::binary_search(vertices.begin(), vertices.end(), id);
    }

    std::size_t vertex_index(std::string_view id) const {
        auto it = std::lower_bound(vertices.begin(), vertices.end(), id);
        if (it == vertices.end() || *it != id)
            throw LookupError("unknown vehicle id '" + std::string(id) + "'");
        return static_cast<std::size_t>(it - vertices.begin());
    }

    bool operator==(const SpanningForest&) const = default;
};

// Kruskal-style greedy forest: edges are scanned in length-ascending order
// (ties by id pair) and accepted unless they close a cycle or push an
// endpoint past the degree cap. Short edges therefore always get first
// claim on the degree budget, which is what keeps long links rare. The
// result is maximal: no rejected edge ever becomes addable later, because
// degrees only grow and components only merge.
inline SpanningForest spanning_forest(std::vector<CandidateEdge> edges,
                                      std::vector<std::string> vertices,
                                      const TopologyConfig& cfg) {
    cfg.validate();
    SpanningForest forest;
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    forest.vertices = std::move(vertices);

    std::sort(edges.begin(), edges.end(), edge_order_less);

    std::size_t n = forest.vertices.size();
    detail::UnionFind uf(n);
    std::vector<int> degree(n, 0);
    for (auto& e : edges) {
        if (e.length > cfg.r_max)
            throw InputError("candidate edge beyond r_max: " + e.u + "-" + e.v);
        int iu = static_cast<int>(forest.vertex_index(e.u));
        int iv = static_cast<int>(forest.vertex_index(e.v));
        if (degree[iu] >= cfg.degree_cap || degree[iv] >= cfg.degree_cap) continue;
        if (!uf.unite(iu, iv)) continue;
        ++degree[iu];
        ++degree[iv];
        forest.edges.push_back(std::move(e));
    }

    std::vector<std::vector<std::string>> buckets(n);
    for (std::size_t i = 0; i < n; ++i)
        buckets[static_cast<std::size_t>(uf.find(static_cast<int>(i)))].push_back(forest.vertices[i]);
    for (auto& b : buckets) {
        if (b.empty()) continue;
        forest.components.push_back(std::move(b));  // already sorted: filled in id order
    }
    std::sort(forest.components.begin(), forest.components.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return forest;
}

// Forest built from one snapshot's candidate graph.
inline SpanningForest snapshot_forest(const Snapshot& snapshot, const TopologyConfig& cfg) {
    DistanceMatrix m = distance_matrix(snapshot);
    return spanning_forest(candidate_links(m, cfg), m.ids, cfg);
}

struct TimedForest {
    double time = 0.0;
    SpanningForest forest;
};

// One forest per snapshot, each computed independently; the topology
// evolves as vehicles move, and clusters may split or merge between steps.
inline std::vector<TimedForest> evolve(const Timeline& timeline, const TopologyConfig& cfg) {
    std::vector<TimedForest> out;
    out.reserve(timeline.snapshots.size());
    for (const auto& snap : timeline.snapshots)
        out.push_back(TimedForest{snap.time, snapshot_forest(snap, cfg)});
    return out;
}

}  // namespace v2vsim
