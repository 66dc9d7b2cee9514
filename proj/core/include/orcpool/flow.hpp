#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

#include "orcpool/curvature.hpp"
#include "orcpool/graph.hpp"

namespace orcpool {

enum class FlowNormalization {
    sum,  // rescale so the weights sum to |E|
    max,  // rescale so the largest weight is 1
    none, // raw update, for checking closed-form one-step weights
};

enum class FlowDistance {
    shortest_path, // d_G(u, v) recomputed on the current weights
    edge_weight,   // d_G(u, v) taken as w_uv; cheaper, approximate
};

std::string_view to_string(FlowNormalization n);
FlowNormalization parse_flow_normalization(std::string_view name);

struct FlowOptions {
    CurvatureOptions curvature;
    FlowNormalization normalization = FlowNormalization::sum;
    FlowDistance distance = FlowDistance::shortest_path;
    double weight_floor = 1e-8;
};

struct FlowState {
    int iteration = 0;
    std::vector<double> weights;  // indexed by edge id
    EdgeCurvatures curvatures;    // computed on the weights of the previous iteration
};

FlowState initial_flow_state(const Graph& g);

// One discrete Ricci flow update w <- (1 - kappa) d_G(u, v), floored, then
// normalized. `g` supplies the structure; the state supplies the weights.
FlowState ricci_flow_step(const Graph& g, const FlowState& state, const FlowOptions& options = {});

// Edge weights after T flow iterations on the input's structure.
struct CurvatureAdjustedAdjacency {
    Graph graph; // input structure, attributes and labels; evolved weights
    int iterations = 0;
    std::vector<std::vector<double>> history; // weights at t = 0..T when recorded
    EdgeCurvatures last_curvatures;           // from the final step (empty for T = 0)
};

// T = 0 returns the input weights unchanged.
CurvatureAdjustedAdjacency ricci_flow(const Graph& g, int iterations, const FlowOptions& options = {},
                                      bool record_history = false);

// t,u,v,w rows for every recorded iteration and edge.
void write_flow_history_csv(const Graph& g, const std::vector<std::vector<double>>& history, std::ostream& out);

} // namespace orcpool
