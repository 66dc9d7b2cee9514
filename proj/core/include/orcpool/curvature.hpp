#pragma once

#include <iosfwd>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "orcpool/graph.hpp"
#include "orcpool/transport.hpp"

namespace orcpool {

enum class CurvatureMethod { exact, sinkhorn, combinatorial };

std::string_view to_string(CurvatureMethod method);
CurvatureMethod parse_curvature_method(std::string_view name);

// One-step diffusion measure: mass alpha at the anchor, the remaining 1-alpha
// spread over neighbors proportionally to exp(-w). An isolated anchor keeps
// all its mass.
struct NeighborhoodMeasure {
    NodeId anchor = 0;
    double alpha = 0.0;
    std::vector<std::pair<NodeId, double>> support; // sorted by node

    double mass(NodeId v) const;
};

NeighborhoodMeasure neighborhood_measure(const Graph& g, NodeId v, double alpha);

struct CurvatureBounds {
    double lower = 0.0;
    double upper = 0.0;
    double combinatorial = 0.0; // midpoint
};

struct EdgeCurvatures {
    std::vector<double> values; // indexed by edge id
    CurvatureMethod method = CurvatureMethod::exact;
    std::optional<std::vector<CurvatureBounds>> bounds;
    std::size_t unconverged = 0; // sinkhorn edges that hit max_iter
};

struct CurvatureOptions {
    CurvatureMethod method = CurvatureMethod::exact;
    double alpha = 0.0;
    SinkhornOptions sinkhorn;
    int workers = 1;
};

// Transport between the endpoint measures of one edge, with the union
// support and its shortest-path ground metric.
struct EdgeTransport {
    std::vector<NodeId> support;
    std::vector<double> source_mass; // p_u on support
    std::vector<double> target_mass; // p_v on support
    Eigen::MatrixXd ground;          // +inf where a distance was not needed
};

// Curvature 1 - W1(p_u, p_v) / w_uv of one edge by exact transport or Sinkhorn;
// the combinatorial method returns the bound midpoint.
double orc_edge(const Graph& g, EdgeId e, const CurvatureOptions& options = {});

// W1 with its optimal plan (plan indices refer to EdgeTransport::support).
struct ExactEdgeResult {
    double kappa = 0.0;
    double w1 = 0.0;
    EdgeTransport transport;
    TransportPlan plan;
};
ExactEdgeResult orc_edge_exact(const Graph& g, EdgeId e, double alpha = 0.0);

// Combinatorial lower/upper bounds at alpha = 0 and their midpoint.
CurvatureBounds orc_bounds(const Graph& g, EdgeId e);

// Curvature of every edge. Edges are split into contiguous blocks, one per
// worker, and each result is written to its own slot, so the output does not
// depend on the worker count.
EdgeCurvatures orc_all(const Graph& g, const CurvatureOptions& options = {});

// u,v,kappa[,kappa_low,kappa_up] sorted by canonical edge key.
void write_curvature_csv(const Graph& g, const EdgeCurvatures& curvatures, std::ostream& out);

} // namespace orcpool
