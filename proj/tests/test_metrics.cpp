#include <gtest/gtest.h>

#include <cmath>

#include "oracles/graph_oracles.hpp"
#include "orcpool/errors.hpp"
#include "orcpool/generators.hpp"
#include "orcpool/metrics.hpp"
#include "orcpool/rng.hpp"
#include "support.hpp"

using namespace orcpool;

namespace {

std::vector<int> random_labels(int n, int k, Rng& rng) {
    std::vector<int> l(static_cast<std::size_t>(n));
    for (int& x : l) x = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
    return l;
}

std::vector<int> to_vector(const Partition& p) { return {p.labels().begin(), p.labels().end()}; }

} // namespace

TEST(Modularity, TwoTrianglesOrdered) {
    const Graph g = testing_support::two_triangles();
    EXPECT_NEAR(modularity(g, *g.labels()), 0.5, 1e-15);
}

TEST(Modularity, SingleEdgeOneCluster) {
    const Graph g = complete_graph(2);
    EXPECT_NEAR(modularity(g, Partition({0, 0})), 0.0, 1e-15);
}

TEST(Modularity, SingletonsAreNegative) {
    const Graph g = testing_support::random_connected_graph(9, 0.3, false, 2);
    const Partition singles({0, 1, 2, 3, 4, 5, 6, 7, 8});
    double expected = 0.0;
    double two_m = 0.0;
    for (int v = 0; v < 9; ++v) two_m += g.weighted_degree(v);
    for (int v = 0; v < 9; ++v) expected -= std::pow(g.weighted_degree(v) / two_m, 2);
    EXPECT_NEAR(modularity(g, singles), expected, 1e-15);
    EXPECT_LT(modularity(g, singles), 0.0);
}

TEST(Modularity, EdgelessGraph) {
    EXPECT_EQ(modularity(Graph::build(3, {}), Partition({0, 1, 1})), 0.0);
    EXPECT_EQ(modularity(Graph::build(3, {}), Partition({0, 1, 1}), ModularityConvention::unordered), 0.0);
}

TEST(Modularity, MatchesBruteForceOracles) {
    Rng rng(4);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Graph g = testing_support::random_connected_graph(12, 0.3, seed % 2 == 0, seed);
        const std::vector<int> labels = random_labels(12, 3, rng);
        EXPECT_NEAR(modularity(g, Partition(labels)), oracle::modularity_ordered(g, labels), 1e-13);
        EXPECT_NEAR(modularity(g, Partition(labels), ModularityConvention::unordered),
                    oracle::modularity_unordered(g, labels), 1e-13);
    }
}

TEST(Modularity, RangeAndScaleInvariance) {
    Rng rng(8);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Graph g = testing_support::random_connected_graph(14, 0.25, false, seed);
        const Partition p(random_labels(14, 4, rng));
        for (auto conv : {ModularityConvention::ordered, ModularityConvention::unordered}) {
            const double q = modularity(g, p, conv);
            EXPECT_GE(q, -1.0);
            EXPECT_LE(q, 1.0);
            // Powers of two scale every weight without rounding.
            for (double c : {0.25, 2.0, 1024.0}) {
                std::vector<double> w = g.weights();
                for (double& x : w) x *= c;
                EXPECT_EQ(modularity(g.with_weights(w), p, conv), q);
            }
            std::vector<double> w = g.weights();
            for (double& x : w) x *= 3.7;
            EXPECT_NEAR(modularity(g.with_weights(w), p, conv), q, 1e-15);
        }
    }
}

TEST(Nmi, Examples) {
    const Partition a({0, 0, 1, 1});
    EXPECT_EQ(nmi(a, a), 1.0);
    EXPECT_EQ(nmi(a, a, NmiVariant::paper), 1.0);
    EXPECT_EQ(nmi(a, Partition({1, 1, 0, 0})), 1.0);
    EXPECT_EQ(nmi(a, Partition({0, 1, 0, 1})), 0.0);
    EXPECT_EQ(nmi(Partition({0, 0, 0}), Partition({0, 0, 0})), 1.0);
}

TEST(Nmi, ConditionalEntropyVariantCanGoNegative) {
    // Unbalanced partitions with many clusters and little shared structure.
    const Partition a({0, 1, 2, 3, 4, 5, 6, 7});
    const Partition b({0, 0, 0, 0, 0, 0, 0, 1});
    EXPECT_LT(nmi(a, b, NmiVariant::paper), 0.0);
    EXPECT_NEAR(nmi(a, b, NmiVariant::paper), oracle::nmi_conditional(to_vector(a), to_vector(b)), 1e-14);
}

TEST(Nmi, Errors) {
    EXPECT_THROW(nmi(Partition({0, 1}), Partition({0, 1, 1})), ParameterError);
    EXPECT_THROW(nmi(Partition(), Partition()), ParameterError);
}

TEST(Nmi, MatchesOracleAndIsSymmetric) {
    Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 5 + static_cast<int>(rng.below(30));
        const auto x = random_labels(n, 1 + static_cast<int>(rng.below(5)), rng);
        const auto y = random_labels(n, 1 + static_cast<int>(rng.below(5)), rng);
        const Partition px(x);
        const Partition py(y);
        const double s = nmi(px, py);
        EXPECT_EQ(s, nmi(py, px));
        EXPECT_EQ(nmi(px, py, NmiVariant::paper), nmi(py, px, NmiVariant::paper));
        EXPECT_GE(s, 0.0);
        EXPECT_LE(s, 1.0);
        EXPECT_LE(nmi(px, py, NmiVariant::paper), 1.0 + 1e-15);
        EXPECT_NEAR(s, std::clamp(oracle::nmi_standard(x, y), 0.0, 1.0), 1e-12);
        EXPECT_NEAR(nmi(px, py, NmiVariant::paper), oracle::nmi_conditional(x, y), 1e-12);
    }
}

TEST(Nmi, LabelPermutationInvariance) {
    Rng rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const auto x = random_labels(20, 4, rng);
        const auto y = random_labels(20, 3, rng);
        const std::vector<int> relabel{2, 0, 3, 1};
        std::vector<int> xr(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) xr[i] = relabel[static_cast<std::size_t>(x[i])];
        EXPECT_NEAR(nmi(Partition(x), Partition(y)), nmi(Partition(xr), Partition(y)), 1e-15);
        EXPECT_NEAR(nmi(Partition(x), Partition(y), NmiVariant::paper),
                    nmi(Partition(xr), Partition(y), NmiVariant::paper), 1e-15);
    }
}

TEST(MetricReport, Json) {
    const nlohmann::json j = to_json({"nmi", 0.75, "standard"}, {{"labels", "a.csv"}});
    EXPECT_EQ(j["metric"], "nmi");
    EXPECT_EQ(j["value"], 0.75);
    EXPECT_EQ(j["convention"], "standard");
    EXPECT_EQ(j["inputs"]["labels"], "a.csv");
}

TEST(MetricEnums, Parse) {
    EXPECT_EQ(parse_modularity_convention("unordered"), ModularityConvention::unordered);
    EXPECT_EQ(parse_nmi_variant("paper"), NmiVariant::paper);
    EXPECT_THROW(parse_nmi_variant("adjusted"), ParameterError);
    EXPECT_THROW(parse_modularity_convention("directed"), ParameterError);
}
