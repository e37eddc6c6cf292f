// v2vsim/routing.hpp - source-to-sink path queries over a spanning forest
#pragma once

#include <deque>
#include <string>
#include <string_view>
#include <vector>

#include "v2vsim/error.hpp"
#include "v2vsim/topology.hpp"

namespace v2vsim {

enum class RouteStatus { delivered, unreachable };

inline std::string_view to_string(RouteStatus s) {
    return s == RouteStatus::delivered ? "delivered" : "unreachable";
}

struct RouteResult {
    RouteStatus status = RouteStatus::unreachable;
    std::vector<std::string> path;  // src..dst when delivered, else empty
    int hops = 0;
    double path_length = 0.0;  // m

    bool operator==(const RouteResult&) const = default;
};

namespace detail {

// Adjacency lists over forest vertex indices, neighbors sorted by index.
inline std::vector<std::vector<std::pair<int, double>>> forest_adjacency(const SpanningForest& f) {
    std::vector<std::vector<std::pair<int, double>>> adj(f.vertices.size());
    for (const auto& e : f.edges) {
        int iu = static_cast<int>(f.vertex_index(e.u));
        int iv = static_cast<int>(f.vertex_index(e.v));
        adj[static_cast<std::size_t>(iu)].emplace_back(iv, e.length);
        adj[static_cast<std::size_t>(iv)].emplace_back(iu, e.length);
    }
    for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
    return adj;
}

}  // namespace detail

// BFS from src; on a forest the src-dst path is unique when it exists, and
// it does not exist exactly when the two ids sit in different components.
inline RouteResult route(const SpanningForest& forest, std::string_view src, std::string_view dst) {
    int start = static_cast<int>(forest.vertex_index(src));
    int goal = static_cast<int>(forest.vertex_index(dst));

    RouteResult result;
    if (start == goal) {
        result.status = RouteStatus::delivered;
        result.path = {std::string(src)};
        return result;
    }

    auto adj = detail::forest_adjacency(forest);
    std::vector<int> parent(forest.vertices.size(), -1);
    std::deque<int> queue{start};
    parent[static_cast<std::size_t>(start)] = start;
    while (!queue.empty() && parent[static_cast<std::size_t>(goal)] == -1) {
        int cur = queue.front();
        queue.pop_front();
        for (auto [nbr, len] : adj[static_cast<std::size_t>(cur)]) {
            (void)len;
            if (parent[static_cast<std::size_t>(nbr)] != -1) continue;
            parent[static_cast<std::size_t>(nbr)] = cur;
            queue.push_back(nbr);
        }
    }
    if (parent[static_cast<std::size_t>(goal)] == -1) return result;  // unreachable

    std::vector<int> rev;
    for (int cur = goal; cur != start; cur = parent[static_cast<std::size_t>(cur)])
        rev.push_back(cur);
    rev.push_back(start);

    result.status = RouteStatus::delivered;
    result.path.reserve(rev.size());
    for (auto it = rev.rbegin(); it != rev.rend(); ++it)
        result.path.push_back(forest.vertices[static_cast<std::size_t>(*it)]);
    result.hops = static_cast<int>(result.path.size()) - 1;
    for (std::size_t i = 1; i < rev.size(); ++i) {
        for (auto [nbr, len] : adj[static_cast<std::size_t>(rev[i])]) {
            if (nbr == rev[i - 1]) {
                result.path_length += len;
                break;
            }
        }
    }
    return result;
}

// Fraction of ordered vehicle pairs that can reach each other, computed from
// component sizes: sum s_i (s_i - 1) / (n (n - 1)). Defined as 1 for n < 2.
inline double reachability_ratio(const SpanningForest& forest) {
    std::size_t n = forest.vertices.size();
    if (n < 2) return 1.0;
    double reachable = 0.0;
    for (const auto& comp : forest.components) {
        double s = static_cast<double>(comp.size());
        reachable += s * (s - 1.0);
    }
    return reachable / (static_cast<double>(n) * static_cast<double>(n - 1));
}

}  // namespace v2vsim
