#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace orcpool {

// Mass moved from support index `source` (first measure) to `target` (second).
struct TransportFlow {
    std::size_t source;
    std::size_t target;
    double mass;
};

struct TransportPlan {
    std::vector<TransportFlow> flows;
    double cost = 0.0;
};

inline constexpr double marginal_tolerance = 1e-9;

// Exact Wasserstein-1 between two measures on a shared support of size n,
// with ground costs cost(i, j). The cost must be a metric on the support:
// mass common to both measures stays in place and only the surplus is routed,
// by successive shortest paths on the bipartite surplus/deficit network.
// Throws NumericError when masses are negative or totals differ by more than
// marginal_tolerance.
TransportPlan wasserstein1_exact(std::span<const double> source_mass, std::span<const double> target_mass,
                                 const Eigen::MatrixXd& cost);

struct SinkhornOptions {
    double epsilon = 1e-3;
    int max_iter = 10000;
    double tol = 1e-9;
};

struct SinkhornResult {
    double cost = 0.0;           // transport cost <P, C> of the entropic plan
    int iterations = 0;
    bool converged = false;      // false: best iterate returned after max_iter
    double marginal_error = 0.0; // L1 violation of the source marginal
};

// Entropic-regularized transport cost via log-domain Sinkhorn iterations.
SinkhornResult wasserstein1_sinkhorn(std::span<const double> source_mass, std::span<const double> target_mass,
                                     const Eigen::MatrixXd& cost, const SinkhornOptions& options = {});

} // namespace orcpool
