#include "orcpool/pooling.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "orcpool/errors.hpp"
#include "orcpool/kmeans.hpp"
#include "orcpool/linalg.hpp"

namespace orcpool {

SpectralSelection spectral_clustering(const Eigen::MatrixXd& affinity, int k, const SpectralOptions& options) {
    const auto n = affinity.rows();
    if (k < 2 || k > n) {
        throw ParameterError(fmt::format("spectral_select: need 2 <= K <= N, got K={} N={}", k, n));
    }
    SpectralSelection out;
    out.solution.normalized = normalized_adjacency(affinity);
    SymmetricEigen eig = symmetric_eigen(out.solution.normalized);
    out.solution.values = eig.values.head(k);
    out.solution.vectors = eig.vectors.leftCols(k);
    out.solution.sweeps = eig.sweeps;

    KMeansOptions km;
    km.k = k;
    km.restarts = options.restarts;
    km.max_iter = options.max_iter;
    km.seed = options.seed;
    const KMeansResult clusters = kmeans(out.solution.vectors, km);
    out.assignment = Assignment::hard(clusters.labels, k);
    return out;
}

SpectralSelection spectral_select(const CurvatureAdjustedAdjacency& c, int k, const SpectralOptions& options) {
    return spectral_clustering(dense_adjacency(c.graph), k, options);
}

double mincut_loss(const Assignment& s, const CurvatureAdjustedAdjacency& c) {
    return mincut_loss(s.matrix(), dense_adjacency(c.graph));
}

CoarsenedGraph reduce_and_connect(const Assignment& s, const Graph& g, const AttributeOptions& attributes) {
    if (s.nodes() != g.node_count()) {
        throw ParameterError(
            fmt::format("reduce_and_connect: assignment has {} rows, graph has {} nodes", s.nodes(), g.node_count()));
    }
    const HardenResult hard = harden(s);
    const Partition labels = hard.assignment.labels();

    CoarsenedGraph out;
    out.dropped_clusters = hard.empty_clusters;
    std::vector<int> remap(static_cast<std::size_t>(s.clusters()), -1);
    int kept = 0;
    for (int c = 0; c < s.clusters(); ++c) {
        if (std::find(out.dropped_clusters.begin(), out.dropped_clusters.end(), c) == out.dropped_clusters.end()) {
            remap[static_cast<std::size_t>(c)] = kept++;
        }
    }
    std::vector<int> coarse_labels(static_cast<std::size_t>(g.node_count()));
    for (int v = 0; v < g.node_count(); ++v) {
        coarse_labels[static_cast<std::size_t>(v)] = remap[static_cast<std::size_t>(labels[v])];
    }
    out.assignment = Assignment::hard(coarse_labels, kept);

    out.pooled_adjacency = Eigen::MatrixXd::Zero(kept, kept);
    for (const Edge& e : g.edges()) {
        const int cu = coarse_labels[static_cast<std::size_t>(e.u)];
        const int cv = coarse_labels[static_cast<std::size_t>(e.v)];
        out.pooled_adjacency(cu, cv) += e.weight;
        out.pooled_adjacency(cv, cu) += e.weight;
    }
    out.intra_cluster_mass = out.pooled_adjacency.trace();

    std::optional<Eigen::MatrixXd> pooled_x;
    if (g.attributes()) pooled_x = out.assignment.matrix().transpose() * *g.attributes();

    std::vector<Edge> edges;
    for (int i = 0; i < kept; ++i) {
        for (int j = i + 1; j < kept; ++j) {
            if (out.pooled_adjacency(i, j) > 0.0) edges.push_back({i, j, 1.0});
        }
    }
    out.graph = Graph::build(kept, edges, std::move(pooled_x));
    if (out.graph.attributes() && out.graph.edge_count() > 0) {
        out.graph = out.graph.with_attribute_similarity_weights(attributes);
    }
    return out;
}

std::string_view to_string(PoolMode mode) { return mode == PoolMode::spectral ? "spectral" : "trained"; }

PoolMode parse_pool_mode(std::string_view name) {
    if (name == "spectral") return PoolMode::spectral;
    if (name == "trained") return PoolMode::trained;
    throw ParameterError(fmt::format("unknown pool mode '{}'", name));
}

PoolResult pool(const Graph& g, const PoolOptions& options) {
    if (options.k < 1 || options.k > g.node_count()) {
        throw ParameterError(fmt::format("pool: need 1 <= K <= N, got K={} N={}", options.k, g.node_count()));
    }
    if (options.iterations < 0) throw ParameterError("pool: iterations must be nonnegative");
    PoolResult out;
    out.adjusted = ricci_flow(g, options.iterations, options.flow);
    if (options.k == 1) {
        out.selection = Assignment::single(g.node_count());
    } else if (options.mode == PoolMode::spectral) {
        SpectralOptions so = options.spectral;
        so.seed = options.seed;
        SpectralSelection sel = spectral_select(out.adjusted, options.k, so);
        out.selection = std::move(sel.assignment);
        out.spectral = std::move(sel.solution);
    } else {
        TrainOptions to = options.train;
        to.k = options.k;
        to.seed = options.seed;
        TrainResult trained = train_soft_assignment(g, out.adjusted, to);
        out.selection = std::move(trained.assignment);
        out.training = std::move(trained.state);
    }
    out.coarse = reduce_and_connect(out.selection, g, options.attributes);
    return out;
}

std::vector<PoolResult> hierarchical_pool(const Graph& g, const std::vector<int>& ks, const PoolOptions& options) {
    if (ks.empty()) throw ParameterError("hierarchical_pool: empty K list");
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (ks[i] < 1) throw ParameterError(fmt::format("hierarchical_pool: K={} at level {} is below 1", ks[i], i));
        if (i > 0 && ks[i] >= ks[i - 1]) {
            throw ParameterError(fmt::format("hierarchical_pool: K list must be strictly decreasing ({} then {})",
                                             ks[i - 1], ks[i]));
        }
    }
    std::vector<PoolResult> levels;
    Graph current = g;
    for (int k : ks) {
        PoolOptions level = options;
        level.k = k;
        levels.push_back(pool(current, level));
        current = levels.back().coarse.graph;
    }
    return levels;
}

} // namespace orcpool
