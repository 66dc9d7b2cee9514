#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace orcpool {

struct KMeansOptions {
    int k = 2;
    int restarts = 10;
    int max_iter = 100;
    std::uint64_t seed = 0;
};

struct KMeansResult {
    std::vector<int> labels; // clusters numbered by first appearance
    Eigen::MatrixXd centroids;
    double sse = 0.0;
};

// Lloyd iterations from k-means++ seeds; the restart with the smallest
// within-cluster SSE wins, earlier restarts on ties. Points are rows.
KMeansResult kmeans(const Eigen::MatrixXd& points, const KMeansOptions& options);

} // namespace orcpool
