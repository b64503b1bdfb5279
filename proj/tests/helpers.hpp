#pragma once

#include <random>
#include <vector>

#include "conclust/core.hpp"

namespace conclust::testing {

/// Path graph v0-v1-...-v_{n-1} with vertices at coordinates 0..n-1 (L1).
inline Instance path_instance(int n, int k) {
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < n; ++i) {
        pts.push_back({(double)i});
        if (i + 1 < n) edges.push_back({i, i + 1});
    }
    return Instance(n, std::move(edges), metric_from_coords(pts, Norm::L1), k);
}

inline Instance complete_instance(const std::vector<std::vector<double>>& pts, int k,
                                  Norm norm = Norm::L2) {
    int n = (int)pts.size();
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.push_back({u, v});
    return Instance(n, std::move(edges), metric_from_coords(pts, norm), k);
}

/// Random connected graph: random spanning tree plus extra edges, random
/// point coordinates in the unit square.
inline Instance random_instance(int n, int k, std::mt19937& rng, double extra_edge_p = 0.3) {
    std::vector<std::pair<int, int>> edges;
    for (int v = 1; v < n; ++v) {
        std::uniform_int_distribution<int> pick(0, v - 1);
        edges.push_back({pick(rng), v});
    }
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            if (v == u + 1 || coin(rng) >= extra_edge_p) continue;
            bool dup = false;
            for (auto [a, b] : edges)
                if ((a == u && b == v) || (a == v && b == u)) dup = true;
            if (!dup) edges.push_back({u, v});
        }
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < n; ++i) pts.push_back({coin(rng), coin(rng)});
    return Instance(n, std::move(edges), metric_from_coords(pts, Norm::L2), k);
}

}  // namespace conclust::testing
