#include "orcpool/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "orcpool/errors.hpp"

namespace orcpool {

Partition::Partition(std::vector<int> labels) : labels_(std::move(labels)) {
    int max_label = -1;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] < 0) {
            throw ValidationError(fmt::format("partition: node {} has negative label {}", i, labels_[i]));
        }
        max_label = std::max(max_label, labels_[i]);
    }
    cluster_count_ = max_label + 1;
}

Graph Graph::build(int node_count, std::span<const Edge> edges,
                   std::optional<Eigen::MatrixXd> attributes, std::optional<Partition> labels) {
    if (node_count < 0) {
        throw ValidationError(fmt::format("graph: negative node count {}", node_count));
    }
    Graph g;
    g.node_count_ = node_count;
    g.edges_.reserve(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const Edge& e = edges[i];
        if (e.u < 0 || e.v < 0 || e.u >= node_count || e.v >= node_count) {
            throw ValidationError(fmt::format("edge {} ({}, {}): endpoint out of range [0, {})", i, e.u,
                                              e.v, node_count));
        }
        if (e.u == e.v) {
            throw ValidationError(fmt::format("edge {} ({}, {}): self-loop", i, e.u, e.v));
        }
        if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
            throw ValidationError(
                fmt::format("edge {} ({}, {}): weight {} is not positive and finite", i, e.u, e.v, e.weight));
        }
        g.edges_.push_back({std::min(e.u, e.v), std::max(e.u, e.v), e.weight});
    }
    std::sort(g.edges_.begin(), g.edges_.end(),
              [](const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
    for (std::size_t i = 1; i < g.edges_.size(); ++i) {
        if (g.edges_[i].u == g.edges_[i - 1].u && g.edges_[i].v == g.edges_[i - 1].v) {
            throw ValidationError(
                fmt::format("edge ({}, {}): duplicate undirected edge", g.edges_[i].u, g.edges_[i].v));
        }
    }

    if (attributes && attributes->rows() != node_count) {
        throw ValidationError(fmt::format("attributes: expected {} rows, got {}", node_count, attributes->rows()));
    }
    if (attributes && !attributes->allFinite()) {
        throw ValidationError("attributes: non-finite entry");
    }
    if (labels && static_cast<int>(labels->size()) != node_count) {
        throw ValidationError(fmt::format("labels: expected {} entries, got {}", node_count, labels->size()));
    }
    g.attributes_ = std::move(attributes);
    g.labels_ = std::move(labels);

    std::vector<std::size_t> counts(static_cast<std::size_t>(node_count) + 1, 0);
    for (const Edge& e : g.edges_) {
        ++counts[static_cast<std::size_t>(e.u) + 1];
        ++counts[static_cast<std::size_t>(e.v) + 1];
    }
    std::partial_sum(counts.begin(), counts.end(), counts.begin());
    g.offsets_ = counts;
    g.adjacency_.resize(2 * g.edges_.size());
    std::vector<std::size_t> cursor(counts.begin(), counts.end() - 1);
    for (EdgeId id = 0; id < g.edges_.size(); ++id) {
        const Edge& e = g.edges_[id];
        g.adjacency_[cursor[static_cast<std::size_t>(e.u)]++] = {e.v, e.weight, id};
        g.adjacency_[cursor[static_cast<std::size_t>(e.v)]++] = {e.u, e.weight, id};
    }
    // find_edge relies on sorted neighbor lists.
    for (int v = 0; v < node_count; ++v) {
        auto first = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[static_cast<std::size_t>(v)]);
        auto last = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[static_cast<std::size_t>(v) + 1]);
        std::sort(first, last, [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
    }
    return g;
}

std::span<const Neighbor> Graph::neighbors(NodeId v) const {
    const auto i = static_cast<std::size_t>(v);
    return std::span<const Neighbor>(adjacency_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
}

int Graph::degree(NodeId v) const {
    const auto i = static_cast<std::size_t>(v);
    return static_cast<int>(offsets_[i + 1] - offsets_[i]);
}

double Graph::weighted_degree(NodeId v) const {
    double d = 0.0;
    for (const Neighbor& nb : neighbors(v)) d += nb.weight;
    return d;
}

std::vector<int> Graph::degrees() const {
    std::vector<int> out(static_cast<std::size_t>(node_count_));
    for (int v = 0; v < node_count_; ++v) out[static_cast<std::size_t>(v)] = degree(v);
    return out;
}

std::optional<EdgeId> Graph::find_edge(NodeId a, NodeId b) const {
    if (a < 0 || b < 0 || a >= node_count_ || b >= node_count_) return std::nullopt;
    auto nbrs = neighbors(a);
    auto it = std::lower_bound(nbrs.begin(), nbrs.end(), b,
                               [](const Neighbor& n, NodeId x) { return n.node < x; });
    if (it == nbrs.end() || it->node != b) return std::nullopt;
    return it->edge;
}

std::vector<double> Graph::weights() const {
    std::vector<double> w(edges_.size());
    for (std::size_t i = 0; i < edges_.size(); ++i) w[i] = edges_[i].weight;
    return w;
}

Graph Graph::with_weights(std::span<const double> weights) const {
    if (weights.size() != edges_.size()) {
        throw ValidationError(fmt::format("weights: expected {} values, got {}", edges_.size(), weights.size()));
    }
    Graph g = *this;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
            throw ValidationError(fmt::format("edge ({}, {}): weight {} is not positive and finite", edges_[i].u,
                                              edges_[i].v, weights[i]));
        }
        g.edges_[i].weight = weights[i];
    }
    for (Neighbor& nb : g.adjacency_) nb.weight = weights[nb.edge];
    return g;
}

Graph Graph::with_labels(std::optional<Partition> labels) const {
    if (labels && static_cast<int>(labels->size()) != node_count_) {
        throw ValidationError(fmt::format("labels: expected {} entries, got {}", node_count_, labels->size()));
    }
    Graph g = *this;
    g.labels_ = std::move(labels);
    return g;
}

Graph Graph::with_attributes(std::optional<Eigen::MatrixXd> attributes) const {
    return build(node_count_, edges_, std::move(attributes), labels_);
}

int attribute_mismatches(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b,
                         double tolerance) {
    int count = 0;
    for (Eigen::Index k = 0; k < a.size(); ++k) {
        const double diff = std::abs(a[k] - b[k]);
        if (tolerance > 0.0 ? diff > tolerance : a[k] != b[k]) ++count;
    }
    return count;
}

Graph Graph::with_attribute_similarity_weights(const AttributeOptions& options) const {
    if (!attributes_) {
        throw StateError("attribute_similarity_weights: graph has no attributes");
    }
    const Eigen::MatrixXd& x = *attributes_;
    const double m = static_cast<double>(x.cols());
    std::vector<double> w(edges_.size());
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const int mismatches =
            attribute_mismatches(x.row(edges_[i].u).transpose(), x.row(edges_[i].v).transpose(), options.tolerance);
        w[i] = (1.0 + mismatches) / (m + 1.0);
    }
    return with_weights(w);
}

Graph Graph::permuted(std::span<const NodeId> perm) const {
    if (static_cast<int>(perm.size()) != node_count_) {
        throw ParameterError("permuted: permutation length does not match node count");
    }
    std::vector<bool> seen(perm.size(), false);
    for (NodeId p : perm) {
        if (p < 0 || p >= node_count_ || seen[static_cast<std::size_t>(p)]) {
            throw ParameterError("permuted: not a permutation");
        }
        seen[static_cast<std::size_t>(p)] = true;
    }
    std::vector<Edge> edges;
    edges.reserve(edges_.size());
    for (const Edge& e : edges_) {
        edges.push_back({perm[static_cast<std::size_t>(e.u)], perm[static_cast<std::size_t>(e.v)], e.weight});
    }
    std::optional<Eigen::MatrixXd> attrs;
    if (attributes_) {
        attrs = Eigen::MatrixXd(attributes_->rows(), attributes_->cols());
        for (int v = 0; v < node_count_; ++v) attrs->row(perm[static_cast<std::size_t>(v)]) = attributes_->row(v);
    }
    std::optional<Partition> labels;
    if (labels_) {
        std::vector<int> l(static_cast<std::size_t>(node_count_));
        for (int v = 0; v < node_count_; ++v) l[static_cast<std::size_t>(perm[static_cast<std::size_t>(v)])] = (*labels_)[v];
        labels = Partition(std::move(l));
    }
    return build(node_count_, edges, std::move(attrs), std::move(labels));
}

bool operator==(const Graph& a, const Graph& b) {
    if (a.node_count_ != b.node_count_ || a.edges_ != b.edges_ || a.labels_ != b.labels_) return false;
    if (a.attributes_.has_value() != b.attributes_.has_value()) return false;
    if (a.attributes_) {
        if (a.attributes_->rows() != b.attributes_->rows() || a.attributes_->cols() != b.attributes_->cols()) {
            return false;
        }
        return *a.attributes_ == *b.attributes_;
    }
    return true;
}

} // namespace orcpool
