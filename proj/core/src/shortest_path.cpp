#include "orcpool/shortest_path.hpp"

#include <functional>
#include <queue>
#include <utility>

#include "orcpool/errors.hpp"

namespace orcpool {

DijkstraWorkspace::DijkstraWorkspace(int node_count)
    : dist_(static_cast<std::size_t>(node_count), unreached),
      settled_(static_cast<std::size_t>(node_count), 0),
      is_target_(static_cast<std::size_t>(node_count), 0) {}

void DijkstraWorkspace::reset() {
    for (NodeId v : touched_) {
        const auto i = static_cast<std::size_t>(v);
        dist_[i] = unreached;
        settled_[i] = 0;
        is_target_[i] = 0;
    }
    touched_.clear();
}

void DijkstraWorkspace::run(const Graph& g, std::span<const NodeId> sources, double radius,
                            std::span<const NodeId> targets) {
    reset();
    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    auto touch = [&](NodeId v) {
        const auto i = static_cast<std::size_t>(v);
        if (dist_[i] == unreached && !settled_[i] && !is_target_[i]) touched_.push_back(v);
    };
    std::size_t targets_left = 0;
    for (NodeId t : targets) {
        touch(t);
        auto& flag = is_target_[static_cast<std::size_t>(t)];
        if (!flag) {
            flag = 1;
            ++targets_left;
        }
    }
    for (NodeId s : sources) {
        touch(s);
        dist_[static_cast<std::size_t>(s)] = 0.0;
        heap.emplace(0.0, s);
    }
    while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        const auto vi = static_cast<std::size_t>(v);
        if (settled_[vi] || d > dist_[vi]) continue;
        if (d > radius) break;
        settled_[vi] = 1;
        if (is_target_[vi] && --targets_left == 0 && !targets.empty()) break;
        for (const Neighbor& nb : g.neighbors(v)) {
            const double nd = d + nb.weight;
            const auto ni = static_cast<std::size_t>(nb.node);
            if (nd < dist_[ni] && nd <= radius) {
                touch(nb.node);
                dist_[ni] = nd;
                heap.emplace(nd, nb.node);
            }
        }
    }
}

std::map<NodeId, double> shortest_path_distances(const Graph& g, NodeId source, std::optional<double> radius) {
    if (source < 0 || source >= g.node_count()) {
        throw ParameterError("shortest_path_distances: source out of range");
    }
    DijkstraWorkspace ws(g.node_count());
    const NodeId sources[] = {source};
    ws.run(g, sources, radius.value_or(DijkstraWorkspace::unreached));
    std::map<NodeId, double> out;
    for (NodeId v : ws.reached()) {
        const double d = ws.distance(v);
        if (d != DijkstraWorkspace::unreached && (!radius || d <= *radius)) out.emplace(v, d);
    }
    return out;
}

} // namespace orcpool
