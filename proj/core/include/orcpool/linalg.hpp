#pragma once

#include <Eigen/Dense>

#include "orcpool/graph.hpp"

namespace orcpool {

// Dense symmetric adjacency of the edge weights.
Eigen::MatrixXd dense_adjacency(const Graph& g);

// D^{-1/2} M D^{-1/2} with D the row sums of M. A row with zero sum becomes
// an identity row (degree floor 1, self weight 1).
Eigen::MatrixXd normalized_adjacency(const Eigen::MatrixXd& m);

struct SymmetricEigen {
    Eigen::VectorXd values;  // descending
    Eigen::MatrixXd vectors; // column k pairs with values[k]
    int sweeps = 0;
};

// Cyclic Jacobi rotations until the off-diagonal mass is negligible. Each
// eigenvector is signed so its first component above 1e-10 in magnitude is
// positive. Throws NumericError when max_sweeps is exhausted.
SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& a, int max_sweeps = 100);

} // namespace orcpool
