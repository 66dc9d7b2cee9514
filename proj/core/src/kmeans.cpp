#include "orcpool/kmeans.hpp"

#include <limits>

#include <fmt/format.h>

#include "orcpool/errors.hpp"
#include "orcpool/rng.hpp"

namespace orcpool {

namespace {

struct Run {
    std::vector<int> labels;
    Eigen::MatrixXd centroids;
    double sse = 0.0;
};

int nearest(const Eigen::MatrixXd& centroids, const Eigen::Ref<const Eigen::RowVectorXd>& x, double& dist) {
    int best = 0;
    dist = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
        const double d = (centroids.row(c) - x).squaredNorm();
        if (d < dist) {
            dist = d;
            best = static_cast<int>(c);
        }
    }
    return best;
}

Eigen::MatrixXd seed_plus_plus(const Eigen::MatrixXd& x, int k, Rng& rng) {
    const Eigen::Index n = x.rows();
    Eigen::MatrixXd centers(k, x.cols());
    std::vector<char> chosen(static_cast<std::size_t>(n), 0);
    Eigen::Index first = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
    centers.row(0) = x.row(first);
    chosen[static_cast<std::size_t>(first)] = 1;
    Eigen::VectorXd d2(n);
    for (Eigen::Index i = 0; i < n; ++i) d2[i] = (x.row(i) - centers.row(0)).squaredNorm();
    for (int c = 1; c < k; ++c) {
        const double total = d2.sum();
        Eigen::Index pick = -1;
        if (total > 0.0) {
            const double r = rng.uniform() * total;
            double acc = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                acc += d2[i];
                if (d2[i] > 0.0 && r < acc) {
                    pick = i;
                    break;
                }
            }
            if (pick < 0) {
                for (Eigen::Index i = n - 1; i >= 0; --i) {
                    if (d2[i] > 0.0) {
                        pick = i;
                        break;
                    }
                }
            }
        } else {
            // Every point coincides with a center: take the lowest unused index.
            for (Eigen::Index i = 0; i < n; ++i) {
                if (!chosen[static_cast<std::size_t>(i)]) {
                    pick = i;
                    break;
                }
            }
        }
        centers.row(c) = x.row(pick);
        chosen[static_cast<std::size_t>(pick)] = 1;
        for (Eigen::Index i = 0; i < n; ++i) d2[i] = std::min(d2[i], (x.row(i) - centers.row(c)).squaredNorm());
    }
    return centers;
}

Run lloyd(const Eigen::MatrixXd& x, Eigen::MatrixXd centers, int max_iter) {
    const Eigen::Index n = x.rows();
    const int k = static_cast<int>(centers.rows());
    Run run;
    run.labels.assign(static_cast<std::size_t>(n), -1);
    for (int it = 0; it < max_iter; ++it) {
        bool changed = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            double d = 0.0;
            const int c = nearest(centers, x.row(i), d);
            if (c != run.labels[static_cast<std::size_t>(i)]) {
                run.labels[static_cast<std::size_t>(i)] = c;
                changed = true;
            }
        }
        if (!changed) break;
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, x.cols());
        std::vector<int> counts(static_cast<std::size_t>(k), 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            const int c = run.labels[static_cast<std::size_t>(i)];
            sums.row(c) += x.row(i);
            ++counts[static_cast<std::size_t>(c)];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) centers.row(c) = sums.row(c) / counts[static_cast<std::size_t>(c)];
        }
    }
    run.sse = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        run.sse += (x.row(i) - centers.row(run.labels[static_cast<std::size_t>(i)])).squaredNorm();
    }
    run.centroids = std::move(centers);
    return run;
}

} // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, const KMeansOptions& options) {
    const Eigen::Index n = points.rows();
    if (options.k < 1 || options.k > n) {
        throw ParameterError(fmt::format("kmeans: k={} must lie in [1, {}]", options.k, n));
    }
    if (options.restarts < 1 || options.max_iter < 1) throw ParameterError("kmeans: restarts and max_iter must be positive");
    Rng rng(options.seed);
    Run best;
    best.sse = std::numeric_limits<double>::infinity();
    for (int r = 0; r < options.restarts; ++r) {
        Run run = lloyd(points, seed_plus_plus(points, options.k, rng), options.max_iter);
        if (run.sse < best.sse) best = std::move(run);
    }

    // Renumber clusters by first appearance.
    std::vector<int> remap(static_cast<std::size_t>(options.k), -1);
    int next = 0;
    for (int& label : best.labels) {
        auto& slot = remap[static_cast<std::size_t>(label)];
        if (slot < 0) slot = next++;
        label = slot;
    }
    KMeansResult out;
    out.centroids.resize(options.k, points.cols());
    for (int c = 0; c < options.k; ++c) {
        int target = remap[static_cast<std::size_t>(c)];
        if (target < 0) target = next++;
        out.centroids.row(target) = best.centroids.row(c);
    }
    out.labels = std::move(best.labels);
    out.sse = best.sse;
    return out;
}

} // namespace orcpool
