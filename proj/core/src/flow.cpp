#include "orcpool/flow.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "orcpool/errors.hpp"
#include "orcpool/shortest_path.hpp"

namespace orcpool {

std::string_view to_string(FlowNormalization n) {
    switch (n) {
    case FlowNormalization::sum: return "sum";
    case FlowNormalization::max: return "max";
    case FlowNormalization::none: return "none";
    }
    return "unknown";
}

FlowNormalization parse_flow_normalization(std::string_view name) {
    if (name == "sum") return FlowNormalization::sum;
    if (name == "max") return FlowNormalization::max;
    if (name == "none") return FlowNormalization::none;
    throw ParameterError(fmt::format("unknown flow normalization '{}'", name));
}

FlowState initial_flow_state(const Graph& g) {
    FlowState s;
    s.weights = g.weights();
    return s;
}

FlowState ricci_flow_step(const Graph& g, const FlowState& state, const FlowOptions& options) {
    if (state.weights.size() != g.edge_count()) {
        throw ParameterError("ricci_flow_step: state does not match graph");
    }
    const Graph current = g.with_weights(state.weights);
    FlowState next;
    next.iteration = state.iteration + 1;
    next.curvatures = orc_all(current, options.curvature);

    const std::size_t m = g.edge_count();
    next.weights.resize(m);
    DijkstraWorkspace dijkstra(g.node_count());
    for (EdgeId e = 0; e < m; ++e) {
        const Edge& edge = current.edge(e);
        double d = edge.weight;
        if (options.distance == FlowDistance::shortest_path) {
            const NodeId src[] = {edge.u};
            const NodeId dst[] = {edge.v};
            dijkstra.run(current, src, edge.weight, dst);
            d = std::min(d, dijkstra.distance(edge.v));
        }
        next.weights[e] = std::max((1.0 - next.curvatures.values[e]) * d, options.weight_floor);
    }

    // Dividing keeps the max scheme exact: the largest weight becomes 1.0.
    double divisor = 1.0;
    if (m > 0) {
        switch (options.normalization) {
        case FlowNormalization::sum:
            divisor = std::accumulate(next.weights.begin(), next.weights.end(), 0.0) / static_cast<double>(m);
            break;
        case FlowNormalization::max:
            divisor = *std::max_element(next.weights.begin(), next.weights.end());
            break;
        case FlowNormalization::none: break;
        }
    }
    if (divisor != 1.0) {
        for (double& w : next.weights) w /= divisor;
    }
    return next;
}

CurvatureAdjustedAdjacency ricci_flow(const Graph& g, int iterations, const FlowOptions& options,
                                      bool record_history) {
    if (iterations < 0) throw ParameterError("ricci_flow: iterations must be nonnegative");
    CurvatureAdjustedAdjacency out;
    out.iterations = iterations;
    out.last_curvatures.method = options.curvature.method;
    FlowState state = initial_flow_state(g);
    if (record_history) out.history.push_back(state.weights);
    for (int t = 0; t < iterations; ++t) {
        state = ricci_flow_step(g, state, options);
        if (record_history) out.history.push_back(state.weights);
    }
    out.graph = iterations == 0 ? g : g.with_weights(state.weights);
    out.last_curvatures = std::move(state.curvatures);
    return out;
}

void write_flow_history_csv(const Graph& g, const std::vector<std::vector<double>>& history, std::ostream& out) {
    out << "t,u,v,w\n";
    const auto edges = g.edges();
    for (std::size_t t = 0; t < history.size(); ++t) {
        for (std::size_t e = 0; e < edges.size(); ++e) {
            out << fmt::format("{},{},{},{}\n", t, edges[e].u, edges[e].v, history[t][e]);
        }
    }
}

} // namespace orcpool
