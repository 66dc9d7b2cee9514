#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "orcpool/assignment.hpp"
#include "orcpool/flow.hpp"
#include "orcpool/graph.hpp"
#include "orcpool/soft_assignment.hpp"

namespace orcpool {

struct SpectralOptions {
    int restarts = 10;
    int max_iter = 100;
    std::uint64_t seed = 0;
};

struct SpectralSolution {
    Eigen::MatrixXd normalized; // D^{-1/2} M D^{-1/2}
    Eigen::VectorXd values;     // top K, descending
    Eigen::MatrixXd vectors;    // N x K, rows are the k-means input
    int sweeps = 0;
};

struct SpectralSelection {
    Assignment assignment; // hard
    SpectralSolution solution;
};

// Top-K eigenvectors of the normalized affinity, then k-means on their rows.
SpectralSelection spectral_clustering(const Eigen::MatrixXd& affinity, int k, const SpectralOptions& options = {});

// spectral_clustering on the dense curvature-adjusted adjacency. Needs 2 <= K <= N.
SpectralSelection spectral_select(const CurvatureAdjustedAdjacency& c, int k, const SpectralOptions& options = {});

double mincut_loss(const Assignment& s, const CurvatureAdjustedAdjacency& c);

struct CoarsenedGraph {
    Graph graph; // supernodes, superedges; attributes are the pooled X^P when present
    Eigen::MatrixXd pooled_adjacency; // S^T A S over kept supernodes, diagonal included
    Assignment assignment;            // hard, empty supernodes removed
    std::vector<int> dropped_clusters;
    double intra_cluster_mass = 0.0; // trace of pooled_adjacency
};

// X^P = S^T X and A^P = S^T A S. Soft input is hardened first. Off-diagonal
// positive entries of A^P become superedges weighted by attribute similarity
// of the pooled attributes, or 1 without attributes.
CoarsenedGraph reduce_and_connect(const Assignment& s, const Graph& g, const AttributeOptions& attributes = {});

enum class PoolMode { spectral, trained };

std::string_view to_string(PoolMode mode);
PoolMode parse_pool_mode(std::string_view name);

struct PoolOptions {
    int k = 2;
    int iterations = 4;
    PoolMode mode = PoolMode::spectral;
    std::uint64_t seed = 0; // overrides the spectral and training seeds
    FlowOptions flow;
    SpectralOptions spectral;
    TrainOptions train;
    AttributeOptions attributes;
};

struct PoolResult {
    CurvatureAdjustedAdjacency adjusted;
    Assignment selection; // soft in trained mode
    CoarsenedGraph coarse;
    std::optional<SpectralSolution> spectral;
    std::optional<TrainState> training;
};

// ricci_flow, then selection, then reduce_and_connect. K = 1 puts every node
// in one supernode.
PoolResult pool(const Graph& g, const PoolOptions& options);

// One pool() per entry of `ks`, each on the previous coarse graph. `ks` must
// be strictly decreasing.
std::vector<PoolResult> hierarchical_pool(const Graph& g, const std::vector<int>& ks, const PoolOptions& options);

} // namespace orcpool
