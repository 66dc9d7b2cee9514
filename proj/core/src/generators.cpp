#include "orcpool/generators.hpp"

#include <fmt/format.h>

#include "orcpool/errors.hpp"
#include "orcpool/rng.hpp"

namespace orcpool {

GabGraph generate_gab(int a, int b) {
    if (b < 2 || a < b) {
        throw ParameterError(fmt::format("generate_gab: need a >= b >= 2, got a={}, b={}", a, b));
    }
    const int cluster_size = a + 1;
    const int n = b * cluster_size;
    std::vector<Edge> edges;
    std::vector<NodeId> hubs;
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int c = 0; c < b; ++c) {
        const int first = c * cluster_size;
        hubs.push_back(first);
        for (int i = 0; i < cluster_size; ++i) {
            labels[static_cast<std::size_t>(first + i)] = c;
            for (int j = i + 1; j < cluster_size; ++j) edges.push_back({first + i, first + j, 1.0});
        }
    }
    for (int c = 0; c < b; ++c) {
        for (int d = c + 1; d < b; ++d) edges.push_back({hubs[static_cast<std::size_t>(c)], hubs[static_cast<std::size_t>(d)], 1.0});
    }
    GabGraph out;
    out.graph = Graph::build(n, edges, std::nullopt, Partition(std::move(labels)));
    out.hubs = hubs;
    out.edge_types.reserve(out.graph.edge_count());
    auto is_hub = [&](NodeId v) { return v % cluster_size == 0; };
    for (const Edge& e : out.graph.edges()) {
        const bool hu = is_hub(e.u);
        const bool hv = is_hub(e.v);
        if (hu && hv) {
            out.edge_types.push_back(GabEdgeType::bridge);
        } else if (hu || hv) {
            out.edge_types.push_back(GabEdgeType::hub);
        } else {
            out.edge_types.push_back(GabEdgeType::internal);
        }
    }
    return out;
}

SbmGraph generate_sbm(const std::vector<int>& block_sizes, double p_in, double p_out, std::uint64_t seed) {
    if (block_sizes.empty()) {
        throw ParameterError("generate_sbm: empty block list");
    }
    if (!(p_out >= 0.0 && p_out <= p_in && p_in <= 1.0)) {
        throw ParameterError(fmt::format("generate_sbm: need 0 <= p_out <= p_in <= 1, got p_in={}, p_out={}", p_in, p_out));
    }
    std::vector<int> labels;
    for (std::size_t k = 0; k < block_sizes.size(); ++k) {
        if (block_sizes[k] < 1) {
            throw ParameterError(fmt::format("generate_sbm: block {} has size {}", k, block_sizes[k]));
        }
        labels.insert(labels.end(), static_cast<std::size_t>(block_sizes[k]), static_cast<int>(k));
    }
    const int n = static_cast<int>(labels.size());
    Rng rng(seed);
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double p = labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)] ? p_in : p_out;
            if (rng.uniform() < p) edges.push_back({i, j, 1.0});
        }
    }
    SbmGraph out;
    out.graph = Graph::build(n, edges, std::nullopt, Partition(std::move(labels)));
    for (int v = 0; v < n; ++v) {
        if (out.graph.degree(v) == 0) out.isolated_nodes.push_back(v);
    }
    return out;
}

Graph generate_dumbbell(int clique_size, int bridge_count) {
    if (clique_size < 2 || bridge_count < 1) {
        throw ParameterError(fmt::format("generate_dumbbell: need clique_size >= 2 and bridge_count >= 1, got {} and {}",
                                         clique_size, bridge_count));
    }
    if (bridge_count > clique_size) {
        throw ParameterError(
            fmt::format("generate_dumbbell: bridge_count {} exceeds clique_size {}", bridge_count, clique_size));
    }
    const int n = 2 * clique_size;
    std::vector<Edge> edges;
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int side = 0; side < 2; ++side) {
        const int first = side * clique_size;
        for (int i = 0; i < clique_size; ++i) {
            labels[static_cast<std::size_t>(first + i)] = side;
            for (int j = i + 1; j < clique_size; ++j) edges.push_back({first + i, first + j, 1.0});
        }
    }
    for (int k = 0; k < bridge_count; ++k) edges.push_back({clique_size - 1 - k, clique_size + k, 1.0});
    return Graph::build(n, edges, std::nullopt, Partition(std::move(labels)));
}

Graph complete_graph(int n, double weight) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) edges.push_back({i, j, weight});
    }
    return Graph::build(n, edges);
}

Graph path_graph(int n, double weight) {
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, weight});
    return Graph::build(n, edges);
}

} // namespace orcpool
