#pragma once

#include <cstdint>
#include <vector>

#include "orcpool/graph.hpp"

namespace orcpool {

// Edge classes of the G_{a,b} model graph.
enum class GabEdgeType : int {
    bridge = 1,   // hub to hub, across clusters
    hub = 2,      // internal edge incident to the cluster hub
    internal = 3, // internal edge between two non-hub nodes
};

struct GabGraph {
    Graph graph;                         // labels carry the cluster index
    std::vector<GabEdgeType> edge_types; // indexed by edge id
    std::vector<NodeId> hubs;            // hub of cluster c is hubs[c]
};

// b cliques of a+1 nodes; node c*(a+1) is the hub of cluster c and the hubs
// form a complete graph. Requires a >= b >= 2.
GabGraph generate_gab(int a, int b);

struct SbmGraph {
    Graph graph;                        // labels carry the block index
    std::vector<NodeId> isolated_nodes; // diagnostic only
};

// Stochastic block model with unit weights. Pairs are visited in (i, j)
// lexicographic order and each consumes one draw, so output is a pure
// function of the arguments.
SbmGraph generate_sbm(const std::vector<int>& block_sizes, double p_in, double p_out, std::uint64_t seed);

// Two cliques joined by bridge_count disjoint bridges. Bridge k joins node
// clique_size-1-k of the left clique to node clique_size+k of the right one.
Graph generate_dumbbell(int clique_size, int bridge_count);

Graph complete_graph(int n, double weight = 1.0);
Graph path_graph(int n, double weight = 1.0);

} // namespace orcpool
