#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "orcpool/errors.hpp"
#include "orcpool/flow.hpp"
#include "orcpool/generators.hpp"
#include "orcpool/theory.hpp"
#include "support.hpp"

using namespace orcpool;

namespace {

double sum(const std::vector<double>& w) { return std::accumulate(w.begin(), w.end(), 0.0); }

} // namespace

TEST(RicciFlowStep, TriangleIsFixedPoint) {
    const Graph g = complete_graph(3);
    FlowOptions raw;
    raw.normalization = FlowNormalization::none;
    const FlowState step = ricci_flow_step(g, initial_flow_state(g), raw);
    for (double w : step.weights) EXPECT_NEAR(w, 0.5, 1e-15);
    const FlowState normalized = ricci_flow_step(g, initial_flow_state(g));
    for (double w : normalized.weights) EXPECT_NEAR(w, 1.0, 1e-15);
    EXPECT_EQ(normalized.iteration, 1);
}

TEST(RicciFlowStep, ZeroCurvatureEdgeUnchangedBeforeNormalization) {
    const Graph g = path_graph(2, 1.7);
    FlowOptions raw;
    raw.normalization = FlowNormalization::none;
    const FlowState step = ricci_flow_step(g, initial_flow_state(g), raw);
    EXPECT_NEAR(step.weights[0], 1.7 * (1.0 - step.curvatures.values[0]), 1e-15);
}

TEST(RicciFlowStep, ShortcutUndercutsEdgeWeight) {
    // d_G(0, 2) = 2 via node 1 while w_02 = 5
    std::vector<Edge> edges{{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 5.0}};
    const Graph g = build_graph(edges, 3);
    FlowOptions raw;
    raw.normalization = FlowNormalization::none;
    const FlowState step = ricci_flow_step(g, initial_flow_state(g), raw);
    const EdgeId e02 = *g.find_edge(0, 2);
    EXPECT_NEAR(step.weights[e02], (1.0 - step.curvatures.values[e02]) * 2.0, 1e-12);
    raw.distance = FlowDistance::edge_weight;
    const FlowState cheap = ricci_flow_step(g, initial_flow_state(g), raw);
    EXPECT_NEAR(cheap.weights[e02], (1.0 - cheap.curvatures.values[e02]) * 5.0, 1e-12);
}

TEST(RicciFlowStep, NormalizationSchemes) {
    const Graph g = testing_support::random_connected_graph(15, 0.3, false, 2);
    const FlowState s = ricci_flow_step(g, initial_flow_state(g));
    EXPECT_NEAR(sum(s.weights), static_cast<double>(g.edge_count()), 1e-9);
    FlowOptions mx;
    mx.normalization = FlowNormalization::max;
    const FlowState m = ricci_flow_step(g, initial_flow_state(g), mx);
    EXPECT_EQ(*std::max_element(m.weights.begin(), m.weights.end()), 1.0);
}

TEST(RicciFlowStep, WeightFloor) {
    // K_2 plus pendant: curvatures below 1 everywhere, but a huge floor shows it is applied
    const Graph g = complete_graph(3);
    FlowOptions o;
    o.normalization = FlowNormalization::none;
    o.weight_floor = 0.75;
    const FlowState s = ricci_flow_step(g, initial_flow_state(g), o);
    for (double w : s.weights) EXPECT_EQ(w, 0.75);
}

TEST(RicciFlow, ZeroIterationsReturnsInput) {
    const Graph g = testing_support::random_connected_graph(12, 0.3, false, 4);
    const CurvatureAdjustedAdjacency c = ricci_flow(g, 0);
    EXPECT_TRUE(c.graph == g);
    EXPECT_EQ(c.iterations, 0);
    EXPECT_THROW(ricci_flow(g, -1), ParameterError);
}

TEST(RicciFlow, SumPreservedEveryStepAndHistoryRecorded) {
    const Graph g = testing_support::random_connected_graph(20, 0.2, false, 6);
    const CurvatureAdjustedAdjacency c = ricci_flow(g, 5, {}, true);
    ASSERT_EQ(c.history.size(), 6u);
    EXPECT_EQ(c.history[0], g.weights());
    for (std::size_t t = 1; t < c.history.size(); ++t) {
        EXPECT_NEAR(sum(c.history[t]), static_cast<double>(g.edge_count()), 1e-9);
        for (double w : c.history[t]) EXPECT_GT(w, 0.0);
    }
    EXPECT_EQ(c.history.back(), c.graph.weights());
}

TEST(RicciFlow, DumbbellBridgeBecomesHeaviest) {
    const Graph g = generate_dumbbell(10, 1);
    const CurvatureAdjustedAdjacency c = ricci_flow(g, 4);
    const EdgeId bridge = *g.find_edge(9, 10);
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (e != bridge) EXPECT_GT(c.graph.edge(bridge).weight, c.graph.edge(e).weight);
    }
}

TEST(RicciFlow, GabTypeUniformityAndOrdering) {
    for (auto [a, b] : {std::pair{3, 3}, std::pair{4, 3}, std::pair{5, 5}}) {
        const GabGraph gab = generate_gab(a, b);
        const CurvatureAdjustedAdjacency c = ricci_flow(gab.graph, 10, {}, true);
        for (std::size_t t = 0; t < c.history.size(); ++t) {
            const TypeWeights tw = per_type_weights(gab, c.history[t]);
            EXPECT_LE(tw.spread.maxCoeff(), 1e-9) << a << "," << b << " t=" << t;
            if (t >= 2) {
                EXPECT_GT(tw.mean[0], tw.mean[1]) << a << "," << b << " t=" << t;
                EXPECT_GT(tw.mean[1], tw.mean[2]) << a << "," << b << " t=" << t;
            }
        }
    }
}

TEST(RicciFlow, PermutationEquivariant) {
    const Graph g = testing_support::random_connected_graph(12, 0.3, true, 12);
    const auto perm = testing_support::random_permutation(g.node_count(), 3);
    const Graph p = g.permuted(perm);
    const CurvatureAdjustedAdjacency cg = ricci_flow(g, 3);
    const CurvatureAdjustedAdjacency cp = ricci_flow(p, 3);
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        const Edge& ed = g.edge(e);
        const EdgeId pe = *p.find_edge(perm[static_cast<std::size_t>(ed.u)], perm[static_cast<std::size_t>(ed.v)]);
        EXPECT_NEAR(cg.graph.edge(e).weight, cp.graph.edge(pe).weight, 1e-12);
    }
}

TEST(RicciFlow, HistoryCsv) {
    const Graph g = complete_graph(3);
    const CurvatureAdjustedAdjacency c = ricci_flow(g, 2, {}, true);
    std::ostringstream ss;
    write_flow_history_csv(g, c.history, ss);
    const std::string text = ss.str();
    EXPECT_EQ(text.substr(0, 8), "t,u,v,w\n");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 3 * 3);
}

TEST(FlowNormalization, Parse) {
    EXPECT_EQ(parse_flow_normalization("max"), FlowNormalization::max);
    EXPECT_THROW(parse_flow_normalization("l2"), ParameterError);
}
