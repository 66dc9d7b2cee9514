#include <benchmark/benchmark.h>

#include "orcpool/curvature.hpp"
#include "orcpool/flow.hpp"
#include "orcpool/generators.hpp"
#include "orcpool/pooling.hpp"
#include "orcpool/rng.hpp"

using namespace orcpool;

namespace {

Graph erdos_renyi(int n, double mean_degree, std::uint64_t seed) {
    Rng rng(seed);
    const double p = mean_degree / (n - 1);
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            if (rng.uniform() < p) edges.push_back({u, v, 1.0});
        }
    }
    return Graph::build(n, edges);
}

void curvature(benchmark::State& state, CurvatureMethod method) {
    const Graph g = erdos_renyi(static_cast<int>(state.range(0)), 10.0, 1);
    CurvatureOptions o;
    o.method = method;
    for (auto _ : state) benchmark::DoNotOptimize(orc_all(g, o));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * g.edge_count()));
}

void BM_Exact(benchmark::State& state) { curvature(state, CurvatureMethod::exact); }
void BM_Sinkhorn(benchmark::State& state) { curvature(state, CurvatureMethod::sinkhorn); }
void BM_Combinatorial(benchmark::State& state) { curvature(state, CurvatureMethod::combinatorial); }

void BM_FlowStep(benchmark::State& state) {
    const Graph g = generate_sbm({100, 100}, 0.1, 0.01, 3).graph;
    FlowOptions o;
    o.distance = state.range(0) == 0 ? FlowDistance::shortest_path : FlowDistance::edge_weight;
    for (auto _ : state) benchmark::DoNotOptimize(ricci_flow(g, 1, o));
}

void BM_SpectralPool(benchmark::State& state) {
    const Graph g = generate_sbm({50, 50, 50}, 0.2, 0.01, 4).graph;
    PoolOptions o;
    o.k = 3;
    o.iterations = 0;
    for (auto _ : state) benchmark::DoNotOptimize(pool(g, o));
}

} // namespace

BENCHMARK(BM_Exact)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sinkhorn)->Arg(250)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Combinatorial)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FlowStep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SpectralPool)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
