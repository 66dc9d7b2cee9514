#include "orcpool/theory.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "orcpool/errors.hpp"
#include "orcpool/metrics.hpp"

namespace orcpool {

namespace {

constexpr double one_step_tolerance = 1e-9;
constexpr double spread_tolerance = 1e-9;
constexpr double inverse_a_tolerance = 1e-10;
constexpr double decay_tolerance = 1e-12;
constexpr double monotone_slack = 1e-12;

void check_ab(int a, int b) {
    if (b < 2 || a < b) throw ParameterError(fmt::format("need a >= b >= 2, got a={}, b={}", a, b));
}

// First t in [1, T) with Q(t + 1) < Q(t) - slack, or -1.
int first_decrease(const std::vector<double>& q, double slack) {
    for (std::size_t t = 1; t + 1 < q.size(); ++t) {
        if (q[t + 1] < q[t] - slack) return static_cast<int>(t);
    }
    return -1;
}

nlohmann::json vec_json(const Eigen::Vector3d& v) { return nlohmann::json::array({v[0], v[1], v[2]}); }

} // namespace

Eigen::Matrix3d flow_matrix(int a, int b) {
    check_ab(a, b);
    const double ad = a;
    const double bd = b;
    const double s = ad + bd;
    Eigen::Matrix3d f;
    f << (ad - 1.0) / s, 2.0 * ad / s, 0.0,
         bd / s, (ad * bd - ad - bd) / (ad * s), 1.0 / s,
         0.0, 0.0, 1.0 / ad;
    return f;
}

std::vector<Eigen::Vector3d> analytic_weight_evolution(int a, int b, int steps) {
    if (steps < 0) throw ParameterError("analytic_weight_evolution: steps must be nonnegative");
    const Eigen::Matrix3d f = flow_matrix(a, b);
    std::vector<Eigen::Vector3d> out;
    out.reserve(static_cast<std::size_t>(steps) + 1);
    out.emplace_back(Eigen::Vector3d::Ones());
    for (int t = 0; t < steps; ++t) {
        out.emplace_back(f * out.back());
    }
    return out;
}

EigenstructureReport verify_eigenstructure(int a, int b) {
    EigenstructureReport r;
    r.a = a;
    r.b = b;
    Eigen::EigenSolver<Eigen::Matrix3d> solver(flow_matrix(a, b), false);
    if (solver.info() != Eigen::Success) throw NumericError(fmt::format("eigen solver failed for F({}, {})", a, b));
    const Eigen::Vector3cd ev = solver.eigenvalues();
    std::array<double, 3> re{};
    for (int i = 0; i < 3; ++i) {
        re[static_cast<std::size_t>(i)] = ev[i].real();
        r.max_imaginary = std::max(r.max_imaginary, std::abs(ev[i].imag()));
    }
    std::sort(re.begin(), re.end(), std::greater<>());
    r.values = Eigen::Vector3d(re[0], re[1], re[2]);
    r.real = r.max_imaginary == 0.0;
    r.lambda1_above_one = r.values[0] > 1.0;
    r.lambda2_is_inverse_a = std::abs(r.values[1] - 1.0 / a) < inverse_a_tolerance;
    r.lambda3_negative = r.values[2] < 0.0;
    return r;
}

TheoryModel theory_model(int a, int b) {
    TheoryModel m;
    m.a = a;
    m.b = b;
    m.f = flow_matrix(a, b);
    m.eigen = verify_eigenstructure(a, b);
    return m;
}

std::string_view to_string(SeriesSource s) { return s == SeriesSource::analytic ? "analytic" : "empirical"; }

SeriesSource parse_series_source(std::string_view name) {
    if (name == "analytic") return SeriesSource::analytic;
    if (name == "empirical") return SeriesSource::empirical;
    throw ParameterError(fmt::format("unknown series source '{}'", name));
}

double gab_modularity(int a, int b, const Eigen::Vector3d& w) {
    const double ad = a;
    const double bd = b;
    const double bridges = bd * (bd - 1.0) / 2.0;
    const double hub_edges = ad * bd;
    const double internal_edges = ad * (ad - 1.0) * bd / 2.0;
    const double total = bridges * w[0] + hub_edges * w[1] + internal_edges * w[2];
    const double d_hub = (bd - 1.0) * w[0] + ad * w[1];
    const double d_internal = w[1] + (ad - 1.0) * w[2];
    const double q = hub_edges * (w[1] - d_hub * d_internal / total) +
                     internal_edges * (w[2] - d_internal * d_internal / total);
    return q / total;
}

std::vector<double> gab_modularity_series(int a, int b, int steps, SeriesSource source, const FlowOptions& flow) {
    check_ab(a, b);
    if (steps < 0) throw ParameterError("gab_modularity_series: steps must be nonnegative");
    std::vector<double> q;
    if (source == SeriesSource::analytic) {
        for (const Eigen::Vector3d& w : analytic_weight_evolution(a, b, steps)) q.push_back(gab_modularity(a, b, w));
        return q;
    }
    const GabGraph gab = generate_gab(a, b);
    const CurvatureAdjustedAdjacency c = ricci_flow(gab.graph, steps, flow, true);
    for (const std::vector<double>& w : c.history) {
        q.push_back(modularity(gab.graph.with_weights(w), *gab.graph.labels(), ModularityConvention::unordered));
    }
    return q;
}

TypeWeights per_type_weights(const GabGraph& gab, const std::vector<double>& weights) {
    TypeWeights out;
    Eigen::Vector3d lo = Eigen::Vector3d::Constant(INFINITY);
    Eigen::Vector3d hi = Eigen::Vector3d::Constant(-INFINITY);
    Eigen::Vector3d count = Eigen::Vector3d::Zero();
    for (std::size_t e = 0; e < weights.size(); ++e) {
        const int t = static_cast<int>(gab.edge_types[e]) - 1;
        out.mean[t] += weights[e];
        count[t] += 1.0;
        lo[t] = std::min(lo[t], weights[e]);
        hi[t] = std::max(hi[t], weights[e]);
    }
    out.mean = out.mean.cwiseQuotient(count);
    out.spread = hi - lo;
    return out;
}

nlohmann::json verify_gab(int a, int b, int steps, const FlowOptions& flow) {
    check_ab(a, b);
    if (steps < 1) throw ParameterError("verify_gab: need at least one step");
    nlohmann::json checks = nlohmann::json::array();
    auto add = [&](std::string name, bool passed, nlohmann::json evidence) {
        checks.push_back({{"check", std::move(name)}, {"passed", passed}, {"evidence", std::move(evidence)}});
    };

    const GabGraph gab = generate_gab(a, b);
    const Eigen::Matrix3d f = flow_matrix(a, b);
    const std::vector<Eigen::Vector3d> analytic = analytic_weight_evolution(a, b, steps);

    FlowOptions raw = flow;
    raw.normalization = FlowNormalization::none;
    const FlowState one = ricci_flow_step(gab.graph, initial_flow_state(gab.graph), raw);
    const TypeWeights first = per_type_weights(gab, one.weights);
    const double one_step_error = (first.mean - analytic[1]).cwiseAbs().maxCoeff();
    add("one_step_matches_flow_matrix",
        one_step_error <= one_step_tolerance && first.spread.maxCoeff() <= one_step_tolerance,
        {{"empirical", vec_json(first.mean)},
         {"analytic", vec_json(analytic[1])},
         {"max_abs_error", one_step_error},
         {"tolerance", one_step_tolerance}});

    const CurvatureAdjustedAdjacency evolved = ricci_flow(gab.graph, steps, flow, true);
    double worst_spread = 0.0;
    int worst_t = 0;
    for (std::size_t t = 0; t < evolved.history.size(); ++t) {
        const double s = per_type_weights(gab, evolved.history[t]).spread.maxCoeff();
        if (s > worst_spread) {
            worst_spread = s;
            worst_t = static_cast<int>(t);
        }
    }
    add("within_type_spread", worst_spread <= spread_tolerance,
        {{"max_spread", worst_spread}, {"at_t", worst_t}, {"tolerance", spread_tolerance}});

    const EigenstructureReport eig = verify_eigenstructure(a, b);
    const nlohmann::json eig_evidence = {{"eigenvalues", vec_json(eig.values)},
                                         {"max_imaginary", eig.max_imaginary},
                                         {"inverse_a", 1.0 / a}};
    add("eigenvalues_real", eig.real, eig_evidence);
    add("lambda1_above_one", eig.lambda1_above_one, eig_evidence);
    add("lambda2_equals_inverse_a", eig.lambda2_is_inverse_a, eig_evidence);
    add("lambda3_negative", eig.lambda3_negative, eig_evidence);

    double decay_error = 0.0;
    for (std::size_t t = 0; t < analytic.size(); ++t) {
        decay_error = std::max(decay_error, std::abs(analytic[t][2] - std::pow(1.0 / a, static_cast<double>(t))));
    }
    add("internal_weight_decay", decay_error <= decay_tolerance,
        {{"max_abs_error", decay_error}, {"tolerance", decay_tolerance}});

    std::vector<double> q_analytic;
    for (const Eigen::Vector3d& w : analytic) q_analytic.push_back(gab_modularity(a, b, w));
    const int analytic_drop = first_decrease(q_analytic, monotone_slack);
    add("analytic_modularity_nondecreasing", analytic_drop < 0,
        {{"series", q_analytic}, {"first_decrease_at", analytic_drop}, {"slack", monotone_slack}});

    std::vector<double> q_empirical;
    for (const std::vector<double>& w : evolved.history) {
        q_empirical.push_back(
            modularity(gab.graph.with_weights(w), *gab.graph.labels(), ModularityConvention::unordered));
    }
    const int empirical_drop = first_decrease(q_empirical, monotone_slack);
    add("empirical_modularity_nondecreasing", empirical_drop < 0,
        {{"series", q_empirical}, {"first_decrease_at", empirical_drop}, {"slack", monotone_slack}});

    bool all = true;
    for (const auto& c : checks) all = all && c["passed"].get<bool>();
    nlohmann::json fm = nlohmann::json::array();
    for (int i = 0; i < 3; ++i) fm.push_back(vec_json(f.row(i).transpose()));
    return {{"model", {{"a", a}, {"b", b}, {"steps", steps}}},
            {"flow_matrix", fm},
            {"checks", checks},
            {"all_passed", all}};
}

void write_series_csv(const std::vector<double>& series, std::ostream& out) {
    out << "t,Q\n";
    for (std::size_t t = 0; t < series.size(); ++t) out << t << ',' << fmt::format("{}", series[t]) << '\n';
}

} // namespace orcpool
