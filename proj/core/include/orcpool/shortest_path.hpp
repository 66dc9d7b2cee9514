#pragma once

#include <limits>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "orcpool/graph.hpp"

namespace orcpool {

// Weighted single-source distances. Nodes farther than radius, and
// unreachable nodes, are omitted.
std::map<NodeId, double> shortest_path_distances(const Graph& g, NodeId source,
                                                 std::optional<double> radius = std::nullopt);

// Reusable Dijkstra state sized to one graph. Resetting touches only the
// nodes reached by the previous run, so repeated local searches stay cheap.
class DijkstraWorkspace {
public:
    static constexpr double unreached = std::numeric_limits<double>::infinity();

    explicit DijkstraWorkspace(int node_count);

    // Multi-source search from `sources` at distance 0. Stops once every node
    // in `targets` is settled (when targets is non-empty) or the frontier
    // exceeds radius.
    void run(const Graph& g, std::span<const NodeId> sources, double radius = unreached,
             std::span<const NodeId> targets = {});

    double distance(NodeId v) const { return dist_[static_cast<std::size_t>(v)]; }
    std::span<const NodeId> reached() const { return touched_; }

private:
    void reset();

    std::vector<double> dist_;
    std::vector<char> settled_;
    std::vector<char> is_target_;
    std::vector<NodeId> touched_;
};

} // namespace orcpool
