#pragma once

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "orcpool/graph.hpp"
#include "orcpool/rng.hpp"

namespace testing_support {

// Random spanning tree plus independent extra edges with probability p.
inline orcpool::Graph random_connected_graph(int n, double p, bool unit_weights, std::uint64_t seed) {
    orcpool::Rng rng(seed);
    std::set<std::pair<int, int>> keys;
    for (int v = 1; v < n; ++v) {
        const int parent = static_cast<int>(rng.below(static_cast<std::uint64_t>(v)));
        keys.insert({parent, v});
    }
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            if (rng.uniform() < p) keys.insert({u, v});
        }
    }
    std::vector<orcpool::Edge> edges;
    for (auto [u, v] : keys) edges.push_back({u, v, unit_weights ? 1.0 : rng.uniform(0.5, 2.0)});
    return orcpool::Graph::build(n, edges);
}

// Erdos-Renyi G(n, p), possibly disconnected.
inline orcpool::Graph erdos_renyi(int n, double p, std::uint64_t seed, bool unit_weights = true) {
    orcpool::Rng rng(seed);
    std::vector<orcpool::Edge> edges;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            if (rng.uniform() < p) edges.push_back({u, v, unit_weights ? 1.0 : rng.uniform(0.5, 2.0)});
        }
    }
    return orcpool::Graph::build(n, edges);
}

inline std::vector<int> random_permutation(int n, std::uint64_t seed) {
    orcpool::Rng rng(seed);
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    for (int i = n - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(i) + 1));
        std::swap(perm[static_cast<std::size_t>(i)], perm[j]);
    }
    return perm;
}

inline orcpool::Graph two_triangles() {
    std::vector<orcpool::Edge> edges{{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}};
    return orcpool::Graph::build(6, edges, std::nullopt, orcpool::Partition({0, 0, 0, 1, 1, 1}));
}

} // namespace testing_support
