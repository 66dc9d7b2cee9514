#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/chrono.h>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "orcpool/curvature.hpp"
#include "orcpool/errors.hpp"
#include "orcpool/flow.hpp"
#include "orcpool/generators.hpp"
#include "orcpool/graph_io.hpp"
#include "orcpool/metrics.hpp"
#include "orcpool/pooling.hpp"
#include "orcpool/theory.hpp"

namespace orcpool::cli {

namespace fs = std::filesystem;
using nlohmann::json;

void emit_plot_data(const std::vector<PlotSeries>& series, std::ostream& out) {
    std::size_t rows = 0;
    for (const PlotSeries& s : series) rows += s.values.size();
    if (rows == 0) throw ValidationError("plot data: empty series");
    out << "t,key,value\n";
    for (const PlotSeries& s : series) {
        for (std::size_t t = 0; t < s.values.size(); ++t) {
            out << t << ',' << s.key << ',' << io::format_real(s.values[t]) << '\n';
        }
    }
}

namespace {

std::string csv_text(const auto& write) {
    std::ostringstream ss;
    write(ss);
    return ss.str();
}

// Every option of the subcommand chain, as given or defaulted.
json echo_options(const CLI::App* app) {
    json opts = json::object();
    for (const CLI::Option* opt : app->get_options()) {
        if (opt->get_lnames().empty() && opt->get_snames().empty()) continue;
        const std::string name = opt->get_lnames().empty() ? opt->get_snames().front() : opt->get_lnames().front();
        if (name == "help") continue;
        if (opt->count() > 0) {
            const auto& results = opt->results();
            opts[name] = results.size() == 1 ? json(results.front()) : json(results);
        } else if (!opt->get_default_str().empty()) {
            opts[name] = opt->get_default_str();
        }
    }
    return opts;
}

void write_config_echo(const fs::path& output, const std::vector<const CLI::App*>& chain,
                       const std::vector<std::string>& argv) {
    json doc;
    std::string command;
    json options = json::object();
    for (const CLI::App* app : chain) {
        if (!command.empty()) command += ' ';
        command += app->get_name();
        const json app_options = echo_options(app);
        for (const auto& [k, v] : app_options.items()) options[k] = v;
    }
    doc["command"] = command;
    doc["argv"] = argv;
    doc["options"] = options;
    doc["version"] = "0.1.0";
    doc["timestamp"] = fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(
                                                                std::chrono::system_clock::now())));
    fs::path echo = output;
    echo += ".config.json";
    io::write_text_file(echo, doc.dump(2) + "\n");
}

struct CurvatureFlags {
    std::string method = "exact";
    double alpha = 0.0;
    double epsilon = 1e-3;
    int max_iter = 10000;
    double tol = 1e-9;
    int workers = 1;

    void add(CLI::App* app) {
        app->add_option("--method", method, "Curvature method")
            ->check(CLI::IsMember({"exact", "sinkhorn", "combinatorial"}))
            ->capture_default_str();
        app->add_option("--alpha", alpha, "Mass kept at the anchor node, in [0, 1)")->capture_default_str();
        app->add_option("--epsilon", epsilon, "Sinkhorn regularization")->capture_default_str();
        app->add_option("--max-iter", max_iter, "Sinkhorn iteration cap")->capture_default_str();
        app->add_option("--tol", tol, "Sinkhorn marginal tolerance")->capture_default_str();
        app->add_option("--workers", workers, "Threads for per-edge curvature")->capture_default_str();
    }

    CurvatureOptions options() const {
        CurvatureOptions o;
        o.method = parse_curvature_method(method);
        o.alpha = alpha;
        o.sinkhorn.epsilon = epsilon;
        o.sinkhorn.max_iter = max_iter;
        o.sinkhorn.tol = tol;
        o.workers = workers;
        return o;
    }
};

struct FlowFlags {
    CurvatureFlags curvature;
    std::string normalization = "sum";
    std::string distance = "shortest-path";

    void add(CLI::App* app) {
        curvature.add(app);
        app->add_option("--normalization", normalization, "Weight normalization after each step")
            ->check(CLI::IsMember({"sum", "max", "none"}))
            ->capture_default_str();
        app->add_option("--distance", distance, "d_G in the update: recomputed shortest path or the edge weight")
            ->check(CLI::IsMember({"shortest-path", "edge-weight"}))
            ->capture_default_str();
    }

    FlowOptions options() const {
        FlowOptions o;
        o.curvature = curvature.options();
        o.normalization = parse_flow_normalization(normalization);
        o.distance = distance == "edge-weight" ? FlowDistance::edge_weight : FlowDistance::shortest_path;
        return o;
    }
};

Graph load_input(const std::string& input, const std::string& attributes) {
    std::optional<fs::path> attr;
    if (!attributes.empty()) attr = attributes;
    return io::load_graph(input, attr);
}

std::vector<PlotSeries> history_series(const Graph& g, const std::vector<std::vector<double>>& history) {
    std::vector<PlotSeries> series;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        PlotSeries s{fmt::format("{}-{}", g.edge(e).u, g.edge(e).v), {}};
        for (const auto& w : history) s.values.push_back(w[e]);
        series.push_back(std::move(s));
    }
    return series;
}

std::string one_line(std::string msg) {
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    return msg;
}

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err, const std::string& level_flag) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    auto log = std::make_shared<spdlog::logger>("orcpool", sink);
    log->set_pattern("[%l] %v");
    std::string level = level_flag;
    if (level.empty()) {
        const char* env = std::getenv("ORCPOOL_LOG");
        level = env ? env : "warn";
    }
    log->set_level(spdlog::level::from_str(level));
    return log;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args(argv, argv + argc);
    CLI::App app{"Curvature-driven graph coarsening: Ollivier-Ricci curvature, Ricci flow and ORC pooling."};
    app.name("orcpool");
    app.require_subcommand(1);
    std::string log_level;
    app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off (default: $ORCPOOL_LOG or warn)")
        ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

    std::string output;
    std::string input;
    std::string attributes;
    std::uint64_t seed = 0;
    auto add_output = [&](CLI::App* sub, const std::string& what) {
        sub->add_option("-o,--output", output, what)->required();
    };
    auto add_input = [&](CLI::App* sub) {
        sub->add_option("-i,--input", input, "Graph file (.json or u,v[,w] CSV)")->required()->check(CLI::ExistingFile);
        sub->add_option("--attributes", attributes, "Node attribute CSV (one row per node)")->check(CLI::ExistingFile);
    };

    // generate
    CLI::App* generate = app.add_subcommand("generate", "Write a synthetic graph with planted labels");
    generate->require_subcommand(1);
    int gab_a = 3;
    int gab_b = 3;
    CLI::App* gen_gab = generate->add_subcommand("gab", "Model graph G_{a,b}: b cliques of a+1 nodes joined at hubs");
    gen_gab->add_option("--a", gab_a, "Clique size minus one")->capture_default_str();
    gen_gab->add_option("--b", gab_b, "Number of cliques")->capture_default_str();
    add_output(gen_gab, "Graph JSON");
    std::vector<int> sbm_sizes{25, 25};
    double p_in = 0.3;
    double p_out = 0.02;
    CLI::App* gen_sbm = generate->add_subcommand("sbm", "Stochastic block model");
    gen_sbm->add_option("--sizes", sbm_sizes, "Block sizes, comma separated")->delimiter(',')->capture_default_str();
    gen_sbm->add_option("--p-in", p_in, "Intra-block edge probability")->capture_default_str();
    gen_sbm->add_option("--p-out", p_out, "Inter-block edge probability")->capture_default_str();
    gen_sbm->add_option("--seed", seed, "Random seed")->capture_default_str();
    add_output(gen_sbm, "Graph JSON");
    int clique_size = 10;
    int bridges = 1;
    CLI::App* gen_dumbbell = generate->add_subcommand("dumbbell", "Two cliques joined by disjoint bridges");
    gen_dumbbell->add_option("--clique-size", clique_size, "Nodes per clique")->capture_default_str();
    gen_dumbbell->add_option("--bridges", bridges, "Number of bridge edges")->capture_default_str();
    add_output(gen_dumbbell, "Graph JSON");

    // curvature
    CLI::App* curvature = app.add_subcommand("curvature", "Ollivier-Ricci curvature of every edge");
    add_input(curvature);
    CurvatureFlags curvature_flags;
    curvature_flags.add(curvature);
    add_output(curvature, "CSV u,v,kappa[,kappa_low,kappa_up]");

    // flow
    CLI::App* flow = app.add_subcommand("flow", "Discrete Ricci flow");
    add_input(flow);
    int iters = 4;
    FlowFlags flow_flags;
    std::string history_path;
    std::string plot_path;
    flow->add_option("--iters", iters, "Flow iterations T")->capture_default_str();
    flow_flags.add(flow);
    flow->add_option("--history", history_path, "CSV t,u,v,w of every iteration");
    flow->add_option("--plot-data", plot_path, "Tidy CSV t,key,value of the weight history");
    add_output(flow, "Graph JSON with evolved weights");

    // pool
    CLI::App* pool_cmd = app.add_subcommand("pool", "ORC pooling: flow, select, reduce and connect");
    add_input(pool_cmd);
    int k = 2;
    std::vector<int> ks;
    std::string mode = "spectral";
    int restarts = 10;
    int epochs = 500;
    double lr = 1e-3;
    std::string features = "auto";
    double attribute_tol = 1e-9;
    std::string assignment_path;
    FlowFlags pool_flow;
    auto* k_opt = pool_cmd->add_option("--k", k, "Supernode count")->capture_default_str();
    auto* ks_opt = pool_cmd->add_option("--ks", ks, "Strictly decreasing supernode counts, one per level")
                       ->delimiter(',');
    k_opt->excludes(ks_opt);
    pool_cmd->add_option("--iters", iters, "Flow iterations T per level")->capture_default_str();
    pool_cmd->add_option("--mode", mode, "Selection solver")
        ->check(CLI::IsMember({"spectral", "trained"}))
        ->capture_default_str();
    pool_cmd->add_option("--seed", seed, "Seed for k-means and parameter init")->capture_default_str();
    pool_cmd->add_option("--restarts", restarts, "k-means restarts")->capture_default_str();
    pool_cmd->add_option("--epochs", epochs, "Training epochs (trained mode)")->capture_default_str();
    pool_cmd->add_option("--lr", lr, "Adam learning rate (trained mode)")->capture_default_str();
    pool_cmd->add_option("--features", features, "Model input features (trained mode)")
        ->check(CLI::IsMember({"auto", "constant", "identity"}))
        ->capture_default_str();
    pool_cmd->add_option("--attribute-tol", attribute_tol, "Tolerance for attribute mismatches")
        ->capture_default_str();
    pool_flow.add(pool_cmd);
    pool_cmd->add_option("--assignment", assignment_path, "CSV node,cluster of the final level");
    add_output(pool_cmd, "Coarse graph JSON");

    // eval
    CLI::App* eval = app.add_subcommand("eval", "Partition quality metrics");
    std::string metric;
    std::string labels_path;
    std::string reference_path;
    std::string graph_path;
    std::string variant = "standard";
    std::string convention = "ordered";
    eval->add_option("--metric", metric, "Metric")->required()->check(CLI::IsMember({"nmi", "modularity"}));
    eval->add_option("--labels", labels_path, "CSV node,label under evaluation")->check(CLI::ExistingFile);
    auto* ref_opt = eval->add_option("--reference", reference_path, "CSV node,label reference partition (nmi)")
                        ->check(CLI::ExistingFile);
    auto* graph_opt = eval->add_option("-g,--graph", graph_path, "Graph file; its labels are the nmi reference")
                          ->check(CLI::ExistingFile);
    ref_opt->excludes(graph_opt);
    eval->add_option("--variant", variant, "NMI variant")
        ->check(CLI::IsMember({"standard", "paper"}))
        ->capture_default_str();
    eval->add_option("--convention", convention, "Modularity pair convention")
        ->check(CLI::IsMember({"ordered", "unordered"}))
        ->capture_default_str();
    add_output(eval, "Metric report JSON");

    // verify
    CLI::App* verify = app.add_subcommand("verify", "Numeric checks of closed-form results");
    verify->require_subcommand(1);
    CLI::App* verify_gab_cmd = verify->add_subcommand("gab", "Flow matrix, eigenstructure and modularity on G_{a,b}");
    int verify_iters = 10;
    std::string series_path;
    std::string series_source = "analytic";
    FlowFlags verify_flow;
    verify_gab_cmd->add_option("--a", gab_a, "Clique size minus one")->capture_default_str();
    verify_gab_cmd->add_option("--b", gab_b, "Number of cliques")->capture_default_str();
    verify_gab_cmd->add_option("--iters", verify_iters, "Flow iterations")->capture_default_str();
    verify_flow.add(verify_gab_cmd);
    verify_gab_cmd->add_option("--series", series_path, "CSV t,Q of the modularity series");
    verify_gab_cmd->add_option("--source", series_source, "Series written by --series")
        ->check(CLI::IsMember({"analytic", "empirical"}))
        ->capture_default_str();
    verify_gab_cmd->add_option("--plot-data", plot_path, "Tidy CSV t,key,value of both modularity series");
    add_output(verify_gab_cmd, "Verification report JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        err << "error:usage: " << one_line(e.what()) << '\n';
        return 1;
    }

    auto log = make_logger(err, log_level);
    std::vector<const CLI::App*> chain{&app};
    for (const CLI::App* sub = &app; !sub->get_subcommands().empty();) {
        sub = sub->get_subcommands().front();
        chain.push_back(sub);
    }

    try {
        const fs::path out_path = output;
        if (gen_gab->parsed()) {
            const GabGraph gab = generate_gab(gab_a, gab_b);
            json extra;
            extra["model"] = {{"a", gab_a}, {"b", gab_b}};
            std::vector<int> types;
            for (GabEdgeType t : gab.edge_types) types.push_back(static_cast<int>(t));
            extra["edge_types"] = types;
            extra["hubs"] = gab.hubs;
            io::write_graph_json(gab.graph, out_path, extra);
            log->info("wrote G_{{{},{}}} with {} nodes, {} edges", gab_a, gab_b, gab.graph.node_count(),
                      gab.graph.edge_count());
        } else if (gen_sbm->parsed()) {
            const SbmGraph sbm = generate_sbm(sbm_sizes, p_in, p_out, seed);
            if (!sbm.isolated_nodes.empty()) log->warn("{} isolated nodes", sbm.isolated_nodes.size());
            io::write_graph_json(sbm.graph, out_path, {{"isolated_nodes", sbm.isolated_nodes}, {"seed", seed}});
        } else if (gen_dumbbell->parsed()) {
            io::write_graph_json(generate_dumbbell(clique_size, bridges), out_path);
        } else if (curvature->parsed()) {
            const Graph g = load_input(input, attributes);
            const EdgeCurvatures kappa = orc_all(g, curvature_flags.options());
            if (kappa.unconverged > 0) log->warn("{} edges hit the Sinkhorn iteration cap", kappa.unconverged);
            io::write_text_file(out_path, csv_text([&](std::ostream& s) { write_curvature_csv(g, kappa, s); }));
        } else if (flow->parsed()) {
            const Graph g = load_input(input, attributes);
            const bool record = !history_path.empty() || !plot_path.empty();
            const CurvatureAdjustedAdjacency c = ricci_flow(g, iters, flow_flags.options(), record);
            io::write_graph_json(c.graph, out_path, {{"flow", {{"iterations", iters}}}});
            if (!history_path.empty()) {
                io::write_text_file(history_path,
                                    csv_text([&](std::ostream& s) { write_flow_history_csv(g, c.history, s); }));
            }
            if (!plot_path.empty()) {
                io::write_text_file(plot_path, csv_text([&](std::ostream& s) {
                                        emit_plot_data(history_series(g, c.history), s);
                                    }));
            }
        } else if (pool_cmd->parsed()) {
            const Graph g = load_input(input, attributes);
            PoolOptions opts;
            opts.iterations = iters;
            opts.mode = parse_pool_mode(mode);
            opts.seed = seed;
            opts.flow = pool_flow.options();
            opts.spectral.restarts = restarts;
            opts.train.epochs = epochs;
            opts.train.learning_rate = lr;
            opts.train.features = parse_feature_source(features);
            opts.attributes.tolerance = attribute_tol;
            if (ks.empty()) ks = {k};
            const std::vector<PoolResult> levels = hierarchical_pool(g, ks, opts);

            std::vector<int> composed(static_cast<std::size_t>(g.node_count()));
            for (int v = 0; v < g.node_count(); ++v) composed[static_cast<std::size_t>(v)] = v;
            json level_info = json::array();
            for (const PoolResult& level : levels) {
                const Partition p = level.coarse.assignment.labels();
                for (int& c : composed) c = p[c];
                json info = {{"k", level.selection.clusters()},
                             {"supernodes", level.coarse.graph.node_count()},
                             {"superedges", level.coarse.graph.edge_count()},
                             {"dropped_clusters", level.coarse.dropped_clusters},
                             {"intra_cluster_mass", level.coarse.intra_cluster_mass}};
                if (level.training) {
                    info["initial_loss"] = level.training->loss_trace.front();
                    info["final_loss"] = level.training->loss_trace.back();
                }
                if (!level.coarse.dropped_clusters.empty()) {
                    log->warn("dropped {} empty supernodes", level.coarse.dropped_clusters.size());
                }
                level_info.push_back(info);
            }
            json provenance = {{"T", iters},          {"K", ks},
                               {"mode", mode},        {"seed", seed},
                               {"levels", level_info}};
            io::write_graph_json(levels.back().coarse.graph, out_path, {{"provenance", provenance}});
            if (!assignment_path.empty()) {
                io::write_partition_csv(Partition(std::move(composed)), fs::path(assignment_path), "cluster");
            }
        } else if (eval->parsed()) {
            MetricReport report;
            json inputs = json::object();
            if (metric == "nmi") {
                if (labels_path.empty()) throw ParameterError("eval nmi: --labels is required");
                const Partition p = io::read_partition_csv(labels_path);
                std::optional<Partition> ref;
                if (!reference_path.empty()) {
                    ref = io::read_partition_csv(reference_path);
                    inputs["reference"] = reference_path;
                } else if (!graph_path.empty()) {
                    ref = io::load_graph(graph_path).labels();
                    if (!ref) throw StateError(fmt::format("eval nmi: {} has no labels", graph_path));
                    inputs["graph"] = graph_path;
                } else {
                    throw ParameterError("eval nmi: give --reference or --graph");
                }
                const NmiVariant v = parse_nmi_variant(variant);
                report = {"nmi", nmi(p, *ref, v), std::string(to_string(v))};
                inputs["labels"] = labels_path;
            } else {
                if (graph_path.empty()) throw ParameterError("eval modularity: --graph is required");
                const Graph g = io::load_graph(graph_path);
                std::optional<Partition> p;
                if (!labels_path.empty()) {
                    p = io::read_partition_csv(labels_path);
                    inputs["labels"] = labels_path;
                } else {
                    p = g.labels();
                    if (!p) throw StateError(fmt::format("eval modularity: {} has no labels", graph_path));
                }
                const ModularityConvention c = parse_modularity_convention(convention);
                report = {"modularity", modularity(g, *p, c), std::string(to_string(c))};
                inputs["graph"] = graph_path;
            }
            io::write_text_file(out_path, to_json(report, inputs).dump(2) + "\n");
            out << fmt::format("{} {}\n", report.name, io::format_real(report.value));
        } else if (verify_gab_cmd->parsed()) {
            const FlowOptions fo = verify_flow.options();
            const json report = verify_gab(gab_a, gab_b, verify_iters, fo);
            io::write_text_file(out_path, report.dump(2) + "\n");
            for (const auto& check : report["checks"]) {
                if (!check["passed"].get<bool>()) log->warn("check failed: {}", check["check"].get<std::string>());
            }
            out << fmt::format("all_passed {}\n", report["all_passed"].get<bool>());
            if (!series_path.empty()) {
                const auto series =
                    gab_modularity_series(gab_a, gab_b, verify_iters, parse_series_source(series_source), fo);
                io::write_text_file(series_path, csv_text([&](std::ostream& s) { write_series_csv(series, s); }));
            }
            if (!plot_path.empty()) {
                const std::vector<PlotSeries> series{
                    {"analytic", gab_modularity_series(gab_a, gab_b, verify_iters, SeriesSource::analytic, fo)},
                    {"empirical", gab_modularity_series(gab_a, gab_b, verify_iters, SeriesSource::empirical, fo)}};
                io::write_text_file(plot_path, csv_text([&](std::ostream& s) { emit_plot_data(series, s); }));
            }
        }
        write_config_echo(out_path, chain, args);
    } catch (const NumericError& e) {
        err << "error:numeric: " << one_line(e.what()) << '\n';
        return 2;
    } catch (const ValidationError& e) {
        err << "error:validation: " << one_line(e.what()) << '\n';
        return 1;
    } catch (const ParameterError& e) {
        err << "error:parameter: " << one_line(e.what()) << '\n';
        return 1;
    } catch (const StateError& e) {
        err << "error:state: " << one_line(e.what()) << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error:internal: " << one_line(e.what()) << '\n';
        return 1;
    }
    return 0;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"orcpool"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace orcpool::cli
