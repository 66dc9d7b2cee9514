#include "orcpool/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <ostream>
#include <thread>

#include <fmt/format.h>

#include "orcpool/errors.hpp"
#include "orcpool/shortest_path.hpp"

namespace orcpool {

std::string_view to_string(CurvatureMethod method) {
    switch (method) {
    case CurvatureMethod::exact: return "exact";
    case CurvatureMethod::sinkhorn: return "sinkhorn";
    case CurvatureMethod::combinatorial: return "combinatorial";
    }
    return "unknown";
}

CurvatureMethod parse_curvature_method(std::string_view name) {
    if (name == "exact") return CurvatureMethod::exact;
    if (name == "sinkhorn") return CurvatureMethod::sinkhorn;
    if (name == "combinatorial") return CurvatureMethod::combinatorial;
    throw ParameterError(fmt::format("unknown curvature method '{}'", name));
}

double NeighborhoodMeasure::mass(NodeId v) const {
    auto it = std::lower_bound(support.begin(), support.end(), v,
                               [](const std::pair<NodeId, double>& s, NodeId x) { return s.first < x; });
    return it != support.end() && it->first == v ? it->second : 0.0;
}

NeighborhoodMeasure neighborhood_measure(const Graph& g, NodeId v, double alpha) {
    if (v < 0 || v >= g.node_count()) throw ParameterError("neighborhood_measure: node out of range");
    if (!(alpha >= 0.0 && alpha < 1.0)) throw ParameterError("neighborhood_measure: alpha must lie in [0, 1)");
    NeighborhoodMeasure m;
    m.anchor = v;
    m.alpha = alpha;
    const auto nbrs = g.neighbors(v);
    if (nbrs.empty()) {
        m.support.emplace_back(v, 1.0);
        return m;
    }
    // exp(-w) shifted by the smallest weight; the ratios are unchanged.
    double w_min = nbrs.front().weight;
    for (const Neighbor& nb : nbrs) w_min = std::min(w_min, nb.weight);
    double total = 0.0;
    for (const Neighbor& nb : nbrs) total += std::exp(-(nb.weight - w_min));
    bool anchor_placed = alpha == 0.0;
    for (const Neighbor& nb : nbrs) {
        if (!anchor_placed && v < nb.node) {
            m.support.emplace_back(v, alpha);
            anchor_placed = true;
        }
        m.support.emplace_back(nb.node, (1.0 - alpha) * std::exp(-(nb.weight - w_min)) / total);
    }
    if (!anchor_placed) m.support.emplace_back(v, alpha);
    return m;
}

namespace {

// Per-thread scratch for local shortest-path queries.
class CurvatureEngine {
public:
    explicit CurvatureEngine(const Graph& g) : g_(g), dijkstra_(g.node_count()) {}

    EdgeTransport transport(EdgeId e, double alpha, bool surplus_rows_only) {
        const Edge& edge = g_.edge(e);
        const auto pu = neighborhood_measure(g_, edge.u, alpha);
        const auto pv = neighborhood_measure(g_, edge.v, alpha);
        EdgeTransport t;
        for (const auto& [node, mass] : pu.support) t.support.push_back(node);
        for (const auto& [node, mass] : pv.support) t.support.push_back(node);
        std::sort(t.support.begin(), t.support.end());
        t.support.erase(std::unique(t.support.begin(), t.support.end()), t.support.end());
        const std::size_t n = t.support.size();
        t.source_mass.resize(n);
        t.target_mass.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            t.source_mass[i] = pu.mass(t.support[i]);
            t.target_mass[i] = pv.mass(t.support[i]);
        }
        const double radius = 2.0 * hop_bound(edge, t.support) * (1.0 + 1e-12);
        t.ground = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n),
                                             std::numeric_limits<double>::infinity());
        for (std::size_t i = 0; i < n; ++i) {
            t.ground(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 0.0;
            if (surplus_rows_only && t.source_mass[i] <= t.target_mass[i]) continue;
            const NodeId src[] = {t.support[i]};
            dijkstra_.run(g_, src, radius, t.support);
            for (std::size_t j = 0; j < n; ++j) {
                t.ground(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = dijkstra_.distance(t.support[j]);
            }
        }
        return t;
    }

    ExactEdgeResult exact(EdgeId e, double alpha) {
        ExactEdgeResult r;
        r.transport = transport(e, alpha, true);
        r.plan = wasserstein1_exact(r.transport.source_mass, r.transport.target_mass, r.transport.ground);
        r.w1 = r.plan.cost;
        r.kappa = 1.0 - r.w1 / g_.edge(e).weight;
        return r;
    }

    std::pair<double, bool> sinkhorn(EdgeId e, double alpha, const SinkhornOptions& options) {
        const EdgeTransport t = transport(e, alpha, false);
        const SinkhornResult s = wasserstein1_sinkhorn(t.source_mass, t.target_mass, t.ground, options);
        return {1.0 - s.cost / g_.edge(e).weight, s.converged};
    }

    CurvatureBounds bounds(EdgeId e) {
        const Edge& edge = g_.edge(e);
        const NodeId u = edge.u;
        const NodeId v = edge.v;
        const double w_uv = edge.weight;
        const auto pu = neighborhood_measure(g_, u, 0.0);
        const auto pv = neighborhood_measure(g_, v, 0.0);

        // Lower bound: cost of an explicit plan that gathers p_u's exclusive
        // mass at u, ships the net imbalance across (u, v), and spreads it
        // from v onto p_v's exclusive neighbors.
        double plan_cost = 0.0;
        double exclusive_u = 0.0; // L_u
        double deficit_common = 0.0;
        for (const Neighbor& nb : g_.neighbors(u)) {
            if (nb.node == v) continue;
            const auto shared = g_.find_edge(nb.node, v);
            if (!shared) {
                plan_cost += nb.weight * pu.mass(nb.node);
                exclusive_u += pu.mass(nb.node);
            } else {
                const double diff = pu.mass(nb.node) - pv.mass(nb.node);
                const double w_cv = g_.edge(*shared).weight;
                if (diff > 0.0) {
                    plan_cost += w_cv * diff;
                } else {
                    plan_cost += nb.weight * (-diff);
                    deficit_common += -diff;
                }
            }
        }
        for (const Neighbor& nb : g_.neighbors(v)) {
            if (nb.node == u || g_.has_edge(nb.node, u)) continue;
            plan_cost += nb.weight * pv.mass(nb.node);
        }
        const double crossing = std::abs(exclusive_u + pu.mass(u) - pv.mass(u) - deficit_common);
        CurvatureBounds b;
        b.lower = 1.0 - plan_cost / w_uv - crossing;

        // Upper bound: every unit of surplus travels at least to the nearest
        // deficit node, and vice versa.
        std::vector<NodeId> region;
        for (const auto& [node, mass] : pu.support) region.push_back(node);
        for (const auto& [node, mass] : pv.support) region.push_back(node);
        region.push_back(u);
        region.push_back(v);
        std::sort(region.begin(), region.end());
        region.erase(std::unique(region.begin(), region.end()), region.end());
        std::vector<NodeId> positive;
        std::vector<NodeId> negative;
        for (NodeId x : region) {
            const double diff = pu.mass(x) - pv.mass(x);
            if (diff > 0.0) positive.push_back(x);
            if (diff < 0.0) negative.push_back(x);
        }
        double to_negative = 0.0;
        double to_positive = 0.0;
        if (!positive.empty() && !negative.empty()) {
            const double radius = 2.0 * hop_bound(edge, region) * (1.0 + 1e-12);
            dijkstra_.run(g_, negative, radius, positive);
            for (NodeId x : positive) to_negative += dijkstra_.distance(x) * (pu.mass(x) - pv.mass(x));
            dijkstra_.run(g_, positive, radius, negative);
            for (NodeId x : negative) to_positive += dijkstra_.distance(x) * (pv.mass(x) - pu.mass(x));
        }
        b.upper = 1.0 - std::max(to_negative, to_positive) / w_uv;
        b.combinatorial = 0.5 * (b.lower + b.upper);
        return b;
    }

private:
    // Largest length of a path from a region node to u that uses only the
    // edge itself and edges incident to u or v. Any two region nodes are
    // within twice this of each other.
    double hop_bound(const Edge& edge, std::span<const NodeId> region) const {
        double bound = edge.weight;
        for (NodeId x : region) {
            if (x == edge.u || x == edge.v) continue;
            double best = std::numeric_limits<double>::infinity();
            if (auto e = g_.find_edge(x, edge.u)) best = std::min(best, g_.edge(*e).weight);
            if (auto e = g_.find_edge(x, edge.v)) best = std::min(best, g_.edge(*e).weight + edge.weight);
            bound = std::max(bound, best);
        }
        return bound;
    }

    const Graph& g_;
    DijkstraWorkspace dijkstra_;
};

void check_edge(const Graph& g, EdgeId e) {
    if (e >= g.edge_count()) throw ParameterError(fmt::format("edge id {} out of range", e));
}

void check_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw ParameterError("curvature: alpha must lie in [0, 1)");
}

} // namespace

ExactEdgeResult orc_edge_exact(const Graph& g, EdgeId e, double alpha) {
    check_edge(g, e);
    check_alpha(alpha);
    CurvatureEngine engine(g);
    return engine.exact(e, alpha);
}

CurvatureBounds orc_bounds(const Graph& g, EdgeId e) {
    check_edge(g, e);
    CurvatureEngine engine(g);
    return engine.bounds(e);
}

double orc_edge(const Graph& g, EdgeId e, const CurvatureOptions& options) {
    check_edge(g, e);
    check_alpha(options.alpha);
    CurvatureEngine engine(g);
    switch (options.method) {
    case CurvatureMethod::exact: return engine.exact(e, options.alpha).kappa;
    case CurvatureMethod::sinkhorn: return engine.sinkhorn(e, options.alpha, options.sinkhorn).first;
    case CurvatureMethod::combinatorial: return engine.bounds(e).combinatorial;
    }
    return 0.0;
}

EdgeCurvatures orc_all(const Graph& g, const CurvatureOptions& options) {
    check_alpha(options.alpha);
    if (options.workers < 1) throw ParameterError("orc_all: workers must be at least 1");
    const std::size_t m = g.edge_count();
    EdgeCurvatures out;
    out.method = options.method;
    out.values.assign(m, 0.0);
    std::vector<char> converged(m, 1);
    if (options.method == CurvatureMethod::combinatorial) out.bounds.emplace(m);

    auto work = [&](std::size_t first, std::size_t last) {
        CurvatureEngine engine(g);
        for (EdgeId e = first; e < last; ++e) {
            switch (options.method) {
            case CurvatureMethod::exact: out.values[e] = engine.exact(e, options.alpha).kappa; break;
            case CurvatureMethod::sinkhorn: {
                auto [kappa, ok] = engine.sinkhorn(e, options.alpha, options.sinkhorn);
                out.values[e] = kappa;
                converged[e] = ok;
                break;
            }
            case CurvatureMethod::combinatorial: {
                const CurvatureBounds b = engine.bounds(e);
                (*out.bounds)[e] = b;
                out.values[e] = b.combinatorial;
                break;
            }
            }
        }
    };

    const auto workers = static_cast<std::size_t>(std::min<std::size_t>(static_cast<std::size_t>(options.workers), std::max<std::size_t>(m, 1)));
    if (workers <= 1) {
        work(0, m);
    } else {
        std::vector<std::exception_ptr> errors(workers);
        {
            std::vector<std::jthread> threads;
            const std::size_t block = (m + workers - 1) / workers;
            for (std::size_t w = 0; w < workers; ++w) {
                const std::size_t first = std::min(m, w * block);
                const std::size_t last = std::min(m, first + block);
                threads.emplace_back([&, w, first, last] {
                    try {
                        work(first, last);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
            }
        }
        for (const auto& err : errors) {
            if (err) std::rethrow_exception(err);
        }
    }
    out.unconverged = static_cast<std::size_t>(std::count(converged.begin(), converged.end(), 0));
    return out;
}

void write_curvature_csv(const Graph& g, const EdgeCurvatures& curvatures, std::ostream& out) {
    const bool with_bounds = curvatures.bounds.has_value();
    out << (with_bounds ? "u,v,kappa,kappa_low,kappa_up\n" : "u,v,kappa\n");
    const auto edges = g.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        out << fmt::format("{},{},{}", edges[e].u, edges[e].v, curvatures.values[e]);
        if (with_bounds) out << fmt::format(",{},{}", (*curvatures.bounds)[e].lower, (*curvatures.bounds)[e].upper);
        out << '\n';
    }
}

} // namespace orcpool
