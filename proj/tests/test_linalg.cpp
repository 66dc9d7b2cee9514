#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "orcpool/errors.hpp"
#include "orcpool/generators.hpp"
#include "orcpool/kmeans.hpp"
#include "orcpool/linalg.hpp"
#include "orcpool/rng.hpp"

using namespace orcpool;

namespace {

Eigen::MatrixXd random_symmetric(int n, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) a(i, j) = a(j, i) = rng.uniform(-1.0, 1.0);
    }
    return a;
}

} // namespace

TEST(NormalizedAdjacency, Examples) {
    const Eigen::MatrixXd k2 = normalized_adjacency(dense_adjacency(complete_graph(2)));
    EXPECT_EQ(k2(0, 1), 1.0);
    const Eigen::MatrixXd k3 = normalized_adjacency(dense_adjacency(complete_graph(3)));
    EXPECT_DOUBLE_EQ(k3(0, 1), 0.5);
    EXPECT_EQ(k3(0, 0), 0.0);
    std::vector<Edge> none;
    const Eigen::MatrixXd iso = normalized_adjacency(dense_adjacency(build_graph(none, 1)));
    EXPECT_EQ(iso(0, 0), 1.0);
}

TEST(NormalizedAdjacency, SymmetricWithSpectrumInUnitInterval) {
    const Graph g = generate_dumbbell(6, 2);
    std::vector<double> w;
    Rng rng(3);
    for (std::size_t e = 0; e < g.edge_count(); ++e) w.push_back(rng.uniform(0.1, 5.0));
    const Eigen::MatrixXd m = normalized_adjacency(dense_adjacency(g.with_weights(w)));
    EXPECT_TRUE(m.isApprox(m.transpose(), 0.0));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    EXPECT_LE(es.eigenvalues().maxCoeff(), 1.0 + 1e-12);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1.0 - 1e-12);
}

TEST(SymmetricEigen, MatchesReferenceSolver) {
    for (int n : {1, 2, 5, 12, 30}) {
        const Eigen::MatrixXd a = random_symmetric(n, static_cast<std::uint64_t>(n));
        const SymmetricEigen eig = symmetric_eigen(a);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(a);
        Eigen::VectorXd ref_desc = ref.eigenvalues().reverse();
        EXPECT_LE((eig.values - ref_desc).cwiseAbs().maxCoeff(), 1e-10) << n;
        for (int k = 0; k < n; ++k) {
            EXPECT_LE((a * eig.vectors.col(k) - eig.values[k] * eig.vectors.col(k)).norm(), 1e-8);
        }
        const Eigen::MatrixXd gram = eig.vectors.transpose() * eig.vectors;
        EXPECT_LE((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-8);
    }
}

TEST(SymmetricEigen, DescendingAndSignConvention) {
    const Eigen::MatrixXd a = random_symmetric(10, 77);
    const SymmetricEigen eig = symmetric_eigen(a);
    for (int k = 1; k < 10; ++k) EXPECT_GE(eig.values[k - 1], eig.values[k]);
    for (int k = 0; k < 10; ++k) {
        for (int i = 0; i < 10; ++i) {
            if (std::abs(eig.vectors(i, k)) > 1e-10) {
                EXPECT_GT(eig.vectors(i, k), 0.0);
                break;
            }
        }
    }
}

TEST(SymmetricEigen, NonConvergenceIsNumericError) {
    EXPECT_THROW(symmetric_eigen(random_symmetric(20, 1), 1), NumericError);
}

TEST(SymmetricEigen, RejectsNonSquare) {
    EXPECT_THROW(symmetric_eigen(Eigen::MatrixXd::Zero(2, 3)), ParameterError);
}

TEST(KMeans, SeparatedBlobs) {
    Eigen::MatrixXd pts(6, 2);
    pts << 0, 0, 0.1, 0, 0, 0.1, 5, 5, 5.1, 5, 5, 5.1;
    KMeansOptions o;
    o.k = 2;
    const KMeansResult r = kmeans(pts, o);
    EXPECT_EQ(r.labels, (std::vector<int>{0, 0, 0, 1, 1, 1}));
    EXPECT_NEAR(r.sse, 4 * 0.1 * 0.1 * 2.0 / 3.0, 1e-12);
}

TEST(KMeans, KEqualsNGivesSingletons) {
    const Eigen::MatrixXd pts = Eigen::MatrixXd::Identity(5, 5);
    KMeansOptions o;
    o.k = 5;
    const KMeansResult r = kmeans(pts, o);
    EXPECT_EQ(r.labels, (std::vector<int>{0, 1, 2, 3, 4}));
    EXPECT_EQ(r.sse, 0.0);
}

TEST(KMeans, DeterministicGivenSeed) {
    const Eigen::MatrixXd pts = random_symmetric(40, 2).leftCols(3);
    KMeansOptions o;
    o.k = 4;
    o.seed = 9;
    EXPECT_EQ(kmeans(pts, o).labels, kmeans(pts, o).labels);
}

TEST(KMeans, DuplicatePointsAndBadK) {
    const Eigen::MatrixXd pts = Eigen::MatrixXd::Ones(4, 2);
    KMeansOptions o;
    o.k = 2;
    const KMeansResult r = kmeans(pts, o);
    EXPECT_EQ(r.sse, 0.0);
    o.k = 5;
    EXPECT_THROW(kmeans(pts, o), ParameterError);
}
