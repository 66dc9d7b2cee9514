// Acceptance checks. Prints one PASS/FAIL line per criterion; an optional
// argument selects a single criterion. Exit status is nonzero when any
// selected criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "cli.hpp"
#include "oracles/finite_difference.hpp"
#include "oracles/graph_oracles.hpp"
#include "orcpool/curvature.hpp"
#include "orcpool/flow.hpp"
#include "orcpool/generators.hpp"
#include "orcpool/graph_io.hpp"
#include "orcpool/kmeans.hpp"
#include "orcpool/linalg.hpp"
#include "orcpool/metrics.hpp"
#include "orcpool/pooling.hpp"
#include "orcpool/soft_assignment.hpp"
#include "orcpool/theory.hpp"
#include "support.hpp"

using namespace orcpool;

namespace {

// Tolerances, pinned.
constexpr double kappa_tol = 1e-9;
constexpr double sandwich_slack = 1e-9;
constexpr double closed_form_tol = 1e-9;
constexpr double one_step_tol = 1e-9;
constexpr double spread_tol = 1e-9;
constexpr double inverse_a_tol = 1e-10;
constexpr double monotone_slack = 1e-12;
constexpr double gradient_rel_tol = 1e-4;
constexpr double c1_budget_seconds = 30.0;
constexpr double speedup_required = 2.0;

struct Outcome {
    bool passed = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

Partition pull_back(const Partition& permuted, const std::vector<int>& perm) {
    std::vector<int> out(perm.size());
    for (std::size_t v = 0; v < perm.size(); ++v) out[v] = permuted[perm[v]];
    return Partition(std::move(out));
}

Outcome orc_exactness() {
    const auto start = Clock::now();
    double worst = 0.0;
    std::size_t edges = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const int n = 4 + static_cast<int>(seed % 9);
        const Graph g = testing_support::random_connected_graph(n, 0.35, seed % 2 == 0, 1000 + seed);
        const EdgeCurvatures k = orc_all(g);
        for (EdgeId e = 0; e < g.edge_count(); ++e) {
            worst = std::max(worst, std::abs(k.values[e] - oracle::curvature_lp(g, g.edge(e))));
            ++edges;
        }
    }
    const double elapsed = seconds_since(start);
    return {worst <= kappa_tol && elapsed < c1_budget_seconds,
            fmt::format("50 graphs, {} edges, max |kappa - lp| = {:.3g} (tol {:g}), {:.2f} s (budget {:g} s)", edges,
                        worst, kappa_tol, elapsed, c1_budget_seconds)};
}

Outcome bound_sandwich() {
    std::size_t violations = 0;
    std::size_t midpoint_mismatches = 0;
    std::size_t edges = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const int n = 4 + static_cast<int>(seed % 9);
        const Graph g = testing_support::random_connected_graph(n, 0.3, true, 2000 + seed);
        CurvatureOptions combinatorial;
        combinatorial.method = CurvatureMethod::combinatorial;
        const EdgeCurvatures exact = orc_all(g);
        const EdgeCurvatures mid = orc_all(g, combinatorial);
        for (EdgeId e = 0; e < g.edge_count(); ++e) {
            const CurvatureBounds& b = (*mid.bounds)[e];
            if (b.lower > exact.values[e] + sandwich_slack || exact.values[e] > b.upper + sandwich_slack) ++violations;
            if (mid.values[e] != 0.5 * (b.lower + b.upper)) ++midpoint_mismatches;
            ++edges;
        }
    }
    return {violations == 0 && midpoint_mismatches == 0,
            fmt::format("200 graphs, {} edges, {} sandwich violations (slack {:g}), {} midpoint mismatches", edges,
                        violations, sandwich_slack, midpoint_mismatches)};
}

Outcome closed_form_curvature() {
    double worst = 0.0;
    for (int n = 3; n <= 8; ++n) {
        const Graph g = complete_graph(n);
        const double expected = (n - 2.0) / (n - 1.0);
        for (double k : orc_all(g).values) worst = std::max(worst, std::abs(k - expected));
    }
    return {worst <= closed_form_tol, fmt::format("K_3..K_8, max |kappa - (n-2)/(n-1)| = {:.3g}", worst)};
}

Outcome one_step_flow_matrix() {
    bool ok = true;
    std::string detail;
    for (auto [a, b] : {std::pair{3, 3}, std::pair{4, 3}, std::pair{5, 5}}) {
        const GabGraph gab = generate_gab(a, b);
        FlowOptions raw;
        raw.normalization = FlowNormalization::none;
        const FlowState one = ricci_flow_step(gab.graph, initial_flow_state(gab.graph), raw);
        const TypeWeights tw = per_type_weights(gab, one.weights);
        const Eigen::Vector3d expected = flow_matrix(a, b) * Eigen::Vector3d::Ones();
        const double err = (tw.mean - expected).cwiseAbs().maxCoeff();
        const CurvatureAdjustedAdjacency c = ricci_flow(gab.graph, 10, {}, true);
        double spread = tw.spread.maxCoeff();
        for (const auto& w : c.history) spread = std::max(spread, per_type_weights(gab, w).spread.maxCoeff());
        const bool pass = err <= one_step_tol && spread <= spread_tol;
        ok = ok && pass;
        detail += fmt::format("({},{}): step [{:.6g}, {:.6g}, {:.6g}] vs F*1 [{:.6g}, {:.6g}, {:.6g}] err {:.3g}, "
                              "max spread {:.3g}; ",
                              a, b, tw.mean[0], tw.mean[1], tw.mean[2], expected[0], expected[1], expected[2], err,
                              spread);
    }
    return {ok, detail};
}

Outcome eigenstructure() {
    std::vector<std::string> failures;
    int points = 0;
    for (int a = 2; a <= 10; ++a) {
        for (int b = 2; b <= a; ++b) {
            const EigenstructureReport r = verify_eigenstructure(a, b);
            const bool pass = r.real && r.values[0] > 1.0 && std::abs(r.values[1] - 1.0 / a) <= inverse_a_tol &&
                              r.values[2] < 0.0;
            if (!pass) {
                failures.push_back(
                    fmt::format("({},{}) lambda = [{:.4f}, {:.4f}, {:.4f}]", a, b, r.values[0], r.values[1], r.values[2]));
            }
            ++points;
        }
    }
    std::string detail = fmt::format("{} of {} grid points pass", points - static_cast<int>(failures.size()), points);
    for (const auto& f : failures) detail += "; fail " + f;
    return {failures.empty(), detail};
}

int first_decrease(const std::vector<double>& q, std::size_t from, std::size_t to) {
    for (std::size_t t = from; t < to && t + 1 < q.size(); ++t) {
        if (q[t + 1] < q[t] - monotone_slack) return static_cast<int>(t);
    }
    return -1;
}

Outcome modularity_monotonicity() {
    int analytic_failures = 0;
    int points = 0;
    for (int a = 2; a <= 10; ++a) {
        for (int b = 2; b <= a; ++b) {
            const auto q = gab_modularity_series(a, b, 15, SeriesSource::analytic);
            if (first_decrease(q, 1, 15) >= 0) ++analytic_failures;
            ++points;
        }
    }
    const auto emp = gab_modularity_series(3, 3, 10, SeriesSource::empirical);
    const int emp_drop = first_decrease(emp, 1, 10);
    return {analytic_failures == 0 && emp_drop < 0,
            fmt::format("analytic: {} of {} grid points nondecreasing on t in [1,15]; empirical G(3,3): Q(1) = {:.4f}, "
                        "Q(10) = {:.4f}, first decrease at t = {}",
                        points - analytic_failures, points, emp[1], emp[10], emp_drop)};
}

Outcome pooling_correctness() {
    PoolOptions o;
    o.k = 2;
    o.iterations = 4;
    const Graph db = generate_dumbbell(10, 1);
    const double nmi_db = nmi(pool(db, o).selection.labels(), *db.labels());
    const Graph tri = testing_support::two_triangles();
    const double nmi_tri = nmi(pool(tri, o).selection.labels(), *tri.labels());

    bool identical = true;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Graph g = generate_sbm({15, 15}, 0.4, 0.05, seed).graph;
        PoolOptions zero = o;
        zero.iterations = 0;
        zero.seed = seed;
        const PoolResult r = pool(g, zero);
        const SymmetricEigen eig = symmetric_eigen(normalized_adjacency(dense_adjacency(g)));
        KMeansOptions km;
        km.k = 2;
        km.seed = seed;
        const KMeansResult plain = kmeans(eig.vectors.leftCols(2), km);
        identical = identical && r.selection.labels() == Partition(plain.labels) &&
                    r.spectral->vectors == eig.vectors.leftCols(2) && r.spectral->values == eig.values.head(2);
    }
    return {nmi_db == 1.0 && nmi_tri == 1.0 && identical,
            fmt::format("dumbbell(10,1) NMI {}, two K_3 NMI {}, T=0 bitwise equal to plain spectral on 5 SBMs: {}",
                        nmi_db, nmi_tri, identical)};
}

Outcome curvature_benefit() {
    int wins = 0;
    std::string per_seed;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Graph g = generate_sbm({25, 25}, 0.3, 0.02, seed).graph;
        PoolOptions o;
        o.k = 2;
        o.seed = seed;
        o.iterations = 0;
        const double base = nmi(pool(g, o).selection.labels(), *g.labels());
        o.iterations = 4;
        const double flowed = nmi(pool(g, o).selection.labels(), *g.labels());
        if (flowed >= base) ++wins;
        per_seed += fmt::format(" {}:{:.3f}/{:.3f}", seed, flowed, base);
    }
    return {wins >= 8, fmt::format("T=4 >= T=0 on {} of 10 seeds (need 8); seed:T4/T0{}", wins, per_seed)};
}

Outcome trained_mode() {
    const Graph g = generate_dumbbell(10, 1);
    TrainOptions base;
    base.k = 2;
    base.features = FeatureSource::identity;
    const CurvatureAdjustedAdjacency c = ricci_flow(g, 4);
    const TrainingProblem problem = make_training_problem(g, c, base);

    double worst_rel = 0.0;
    for (std::uint64_t point = 0; point < 20; ++point) {
        const ModelParameters p = init_parameters(static_cast<int>(problem.propagated.cols()), base, 500 + point);
        auto f = [&](const Eigen::VectorXd& x) { return evaluate_objective(p.unflatten(x), problem).total; };
        const Eigen::VectorXd numeric = oracle::central_gradient(f, p.flatten());
        const Eigen::VectorXd analytic = objective_gradient(p, problem).second.flatten();
        worst_rel = std::max(worst_rel, (analytic - numeric).norm() / std::max(numeric.norm(), 1e-12));
    }

    int perfect = 0;
    bool traces_ok = true;
    std::string per_seed;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        PoolOptions o;
        o.k = 2;
        o.iterations = 4;
        o.mode = PoolMode::trained;
        o.seed = seed;
        o.train = base;
        o.train.epochs = 500;
        const PoolResult r = pool(g, o);
        const double score = nmi(harden(r.selection).assignment.labels(), *g.labels());
        if (score == 1.0) ++perfect;
        const auto& trace = r.training->loss_trace;
        const bool finite = std::all_of(trace.begin(), trace.end(), [](double x) { return std::isfinite(x); });
        traces_ok = traces_ok && finite && trace.back() <= trace.front();
        per_seed += fmt::format(" {}:{:.3f}", seed, score);
    }
    return {worst_rel < gradient_rel_tol && perfect >= 9 && traces_ok,
            fmt::format("max gradient rel error {:.3g} (tol {:g}); NMI 1.0 on {} of 10 seeds (need 9);{}; traces "
                        "finite and nonincreasing end to end: {}",
                        worst_rel, gradient_rel_tol, perfect, per_seed, traces_ok)};
}

double median_seconds(const std::function<void()>& run) {
    std::vector<double> t;
    for (int i = 0; i < 3; ++i) {
        const auto start = Clock::now();
        run();
        t.push_back(seconds_since(start));
    }
    std::sort(t.begin(), t.end());
    return t[1];
}

Outcome runtime_trend() {
    const int n = 2000;
    const Graph g = testing_support::erdos_renyi(n, 10.0 / (n - 1), 42);
    CurvatureOptions exact;
    CurvatureOptions combinatorial;
    combinatorial.method = CurvatureMethod::combinatorial;
    const double t_comb = median_seconds([&] { orc_all(g, combinatorial); });
    const double t_exact = median_seconds([&] { orc_all(g, exact); });
    const double speedup = t_exact / t_comb;
    return {speedup >= speedup_required,
            fmt::format("ER n={} m={}, median of 3: combinatorial {:.3f} s, exact {:.3f} s, speedup {:.1f}x (need {:g}x)",
                        n, g.edge_count(), t_comb, t_exact, speedup, speedup_required)};
}

Outcome permutation_invariance() {
    const Graph g = generate_dumbbell(10, 1);
    PoolOptions o;
    o.k = 2;
    const Partition base = pool(g, o).selection.labels();
    int agree = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto perm = testing_support::random_permutation(g.node_count(), 700 + seed);
        const Partition p = pull_back(pool(g.permuted(perm), o).selection.labels(), perm);
        if (nmi(base, p) == 1.0) ++agree;
    }
    return {agree == 20, fmt::format("{} of 20 permutations agree at NMI 1.0", agree)};
}

Outcome cli_determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "orcpool_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto p = [&](const std::string& name) { return (dir / name).string(); };
    const std::vector<std::vector<std::string>> pipeline = {
        {"generate", "gab", "--a", "3", "--b", "3", "-o", "gab.json"},
        {"generate", "sbm", "--sizes", "20,20", "--p-in", "0.3", "--p-out", "0.05", "--seed", "7", "-o", "sbm.json"},
        {"generate", "dumbbell", "--clique-size", "10", "-o", "db.json"},
        {"curvature", "-i", "sbm.json", "--method", "exact", "-o", "k_exact.csv"},
        {"curvature", "-i", "sbm.json", "--method", "sinkhorn", "-o", "k_sinkhorn.csv"},
        {"curvature", "-i", "sbm.json", "--method", "combinatorial", "--workers", "3", "-o", "k_comb.csv"},
        {"flow", "-i", "sbm.json", "--iters", "4", "--history", "hist.csv", "--plot-data", "flow_plot.csv", "-o",
         "flow.json"},
        {"pool", "-i", "db.json", "--k", "2", "--iters", "4", "--mode", "spectral", "--seed", "3", "--assignment",
         "s_spectral.csv", "-o", "coarse_spectral.json"},
        {"pool", "-i", "db.json", "--k", "2", "--iters", "4", "--mode", "trained", "--epochs", "50", "--seed", "3",
         "--assignment", "s_train.csv", "-o", "coarse_train.json"},
        {"pool", "-i", "sbm.json", "--ks", "4,2", "--seed", "5", "--assignment", "s_h.csv", "-o", "coarse_h.json"},
        {"eval", "--metric", "nmi", "--labels", "s_spectral.csv", "-g", "db.json", "-o", "nmi.json"},
        {"eval", "--metric", "modularity", "-g", "sbm.json", "-o", "q.json"},
        {"verify", "gab", "--a", "3", "--b", "3", "--iters", "10", "--series", "series.csv", "--plot-data",
         "verify_plot.csv", "-o", "verify.json"},
    };
    const std::vector<std::string> outputs = {
        "gab.json",   "sbm.json",      "db.json",        "k_exact.csv",       "k_sinkhorn.csv", "k_comb.csv",
        "hist.csv",   "flow_plot.csv", "flow.json",      "s_spectral.csv",        "coarse_spectral.json", "s_train.csv",
        "coarse_train.json", "s_h.csv", "coarse_h.json", "nmi.json",          "q.json",         "series.csv",
        "verify_plot.csv", "verify.json"};

    auto run_all = [&](std::vector<std::string>& stdout_lines) {
        for (auto args : pipeline) {
            for (auto& a : args) {
                if (a.ends_with(".json") || a.ends_with(".csv")) a = p(a);
            }
            std::ostringstream out;
            std::ostringstream err;
            if (cli::run(args, out, err) != 0) throw std::runtime_error("pipeline step failed: " + err.str());
            stdout_lines.push_back(out.str());
        }
        std::vector<std::string> contents;
        for (const auto& f : outputs) contents.push_back(io::read_text_file(p(f)));
        return contents;
    };
    std::vector<std::string> out_a;
    std::vector<std::string> out_b;
    const auto first = run_all(out_a);
    const auto second = run_all(out_b);
    int differing = 0;
    std::string which;
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        if (first[i] != second[i]) {
            ++differing;
            which += " " + outputs[i];
        }
    }
    const bool stdout_same = out_a == out_b;
    fs::remove_all(dir);
    return {differing == 0 && stdout_same,
            fmt::format("{} commands, {} output files compared, {} differ{}; stdout identical: {}", pipeline.size(),
                        outputs.size(), differing, which, stdout_same)};
}

} // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"orc exactness vs LP oracle", orc_exactness},
        {"combinatorial bound sandwich", bound_sandwich},
        {"closed-form K_n curvature", closed_form_curvature},
        {"one-step flow matrix on G(a,b)", one_step_flow_matrix},
        {"flow matrix eigenstructure", eigenstructure},
        {"modularity monotonicity under flow", modularity_monotonicity},
        {"pooling correctness", pooling_correctness},
        {"curvature-adjustment benefit on SBMs", curvature_benefit},
        {"trained mode", trained_mode},
        {"combinatorial vs exact runtime", runtime_trend},
        {"permutation invariance", permutation_invariance},
        {"CLI determinism", cli_determinism},
    };
    int only = 0;
    if (argc > 1) {
        only = std::atoi(argv[1]);
        if (only < 1 || only > static_cast<int>(criteria.size())) {
            std::cerr << "usage: " << argv[0] << " [criterion 1-" << criteria.size() << "]\n";
            return 2;
        }
    }
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only != 0 && static_cast<int>(i) + 1 != only) continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.passed) ++failed;
        std::cout << fmt::format("{} C{:02d} {}: {}", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail)
                  << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
