#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace orcpool {

using NodeId = int;
using EdgeId = std::size_t;

// Undirected edge with canonical orientation u < v.
struct Edge {
    NodeId u = 0;
    NodeId v = 0;
    double weight = 1.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
    NodeId node;
    double weight;
    EdgeId edge;
};

// Node partition with labels in [0, cluster_count).
class Partition {
public:
    Partition() = default;
    explicit Partition(std::vector<int> labels);

    std::span<const int> labels() const { return labels_; }
    int operator[](NodeId v) const { return labels_[static_cast<std::size_t>(v)]; }
    std::size_t size() const { return labels_.size(); }
    int cluster_count() const { return cluster_count_; }

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    std::vector<int> labels_;
    int cluster_count_ = 0;
};

struct AttributeOptions {
    // Attributes closer than this compare equal. Zero gives exact comparison.
    double tolerance = 1e-9;
};

// Immutable weighted undirected graph in compressed sparse row form.
//
// Edges are stored once, sorted by (u, v) with u < v; the CSR mirror holds
// both directions and points back at the owning edge id.
class Graph {
public:
    Graph() = default;

    // Throws ValidationError on self-loops, nonpositive or non-finite weights,
    // out-of-range endpoints, duplicate edges, or attribute/label row mismatch.
    static Graph build(int node_count, std::span<const Edge> edges,
                       std::optional<Eigen::MatrixXd> attributes = std::nullopt,
                       std::optional<Partition> labels = std::nullopt);

    int node_count() const { return node_count_; }
    std::size_t edge_count() const { return edges_.size(); }
    std::span<const Edge> edges() const { return edges_; }
    const Edge& edge(EdgeId e) const { return edges_[e]; }

    std::span<const Neighbor> neighbors(NodeId v) const;
    int degree(NodeId v) const;
    double weighted_degree(NodeId v) const;
    std::vector<int> degrees() const;

    std::optional<EdgeId> find_edge(NodeId a, NodeId b) const;
    bool has_edge(NodeId a, NodeId b) const { return find_edge(a, b).has_value(); }

    const std::optional<Eigen::MatrixXd>& attributes() const { return attributes_; }
    const std::optional<Partition>& labels() const { return labels_; }

    std::vector<double> weights() const;

    // Same structure, attributes and labels; weights replaced (in edge order).
    Graph with_weights(std::span<const double> weights) const;
    Graph with_labels(std::optional<Partition> labels) const;
    Graph with_attributes(std::optional<Eigen::MatrixXd> attributes) const;

    // Re-initializes weights as (1 + #mismatched attributes) / (m + 1).
    // Throws StateError when the graph has no attributes.
    Graph with_attribute_similarity_weights(const AttributeOptions& options = {}) const;

    // Relabels node v as perm[v]; attributes and labels follow their node.
    Graph permuted(std::span<const NodeId> perm) const;

    friend bool operator==(const Graph& a, const Graph& b);

private:
    int node_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Neighbor> adjacency_;
    std::optional<Eigen::MatrixXd> attributes_;
    std::optional<Partition> labels_;
};

// Free-function spelling used throughout the pipeline.
inline Graph build_graph(std::span<const Edge> edges, int node_count,
                         std::optional<Eigen::MatrixXd> attributes = std::nullopt) {
    return Graph::build(node_count, edges, std::move(attributes));
}

inline Graph attribute_similarity_weights(const Graph& g, const AttributeOptions& options = {}) {
    return g.with_attribute_similarity_weights(options);
}

// Count of positions k where the attribute rows differ by more than tolerance.
int attribute_mismatches(const Eigen::Ref<const Eigen::VectorXd>& a,
                         const Eigen::Ref<const Eigen::VectorXd>& b, double tolerance);

} // namespace orcpool
