#include "orcpool/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "orcpool/errors.hpp"

namespace orcpool {

std::string_view to_string(ModularityConvention c) {
    return c == ModularityConvention::ordered ? "ordered" : "unordered";
}

ModularityConvention parse_modularity_convention(std::string_view name) {
    if (name == "ordered") return ModularityConvention::ordered;
    if (name == "unordered") return ModularityConvention::unordered;
    throw ParameterError(fmt::format("unknown modularity convention '{}'", name));
}

std::string_view to_string(NmiVariant v) { return v == NmiVariant::standard ? "standard" : "paper"; }

NmiVariant parse_nmi_variant(std::string_view name) {
    if (name == "standard") return NmiVariant::standard;
    if (name == "paper") return NmiVariant::paper;
    throw ParameterError(fmt::format("unknown NMI variant '{}'", name));
}

double modularity(const Graph& g, const Partition& labels, ModularityConvention convention) {
    if (static_cast<int>(labels.size()) != g.node_count()) {
        throw ParameterError(
            fmt::format("modularity: {} labels for {} nodes", labels.size(), g.node_count()));
    }
    double total = 0.0;
    for (const Edge& e : g.edges()) total += e.weight;
    if (total == 0.0) return 0.0;

    std::vector<double> degree(static_cast<std::size_t>(g.node_count()), 0.0);
    for (const Edge& e : g.edges()) {
        degree[static_cast<std::size_t>(e.u)] += e.weight;
        degree[static_cast<std::size_t>(e.v)] += e.weight;
    }

    if (convention == ModularityConvention::unordered) {
        double q = 0.0;
        for (const Edge& e : g.edges()) {
            if (labels[e.u] != labels[e.v]) continue;
            q += e.weight - degree[static_cast<std::size_t>(e.u)] * degree[static_cast<std::size_t>(e.v)] / total;
        }
        return q / total;
    }

    const double two_m = 2.0 * total;
    std::vector<double> inside(static_cast<std::size_t>(labels.cluster_count()), 0.0);
    std::vector<double> volume(static_cast<std::size_t>(labels.cluster_count()), 0.0);
    for (const Edge& e : g.edges()) {
        if (labels[e.u] == labels[e.v]) inside[static_cast<std::size_t>(labels[e.u])] += 2.0 * e.weight;
    }
    for (int v = 0; v < g.node_count(); ++v) volume[static_cast<std::size_t>(labels[v])] += degree[static_cast<std::size_t>(v)];
    double q = 0.0;
    for (std::size_t c = 0; c < inside.size(); ++c) {
        const double share = volume[c] / two_m;
        q += inside[c] / two_m - share * share;
    }
    return q;
}

namespace {

double entropy(const std::map<int, double>& counts, double n, double log_base) {
    double h = 0.0;
    for (const auto& [label, count] : counts) {
        const double p = count / n;
        h -= p * std::log(p);
    }
    return h / log_base;
}

} // namespace

double nmi(const Partition& a, const Partition& b, NmiVariant variant) {
    if (a.size() != b.size()) {
        throw ParameterError(fmt::format("nmi: partitions have lengths {} and {}", a.size(), b.size()));
    }
    if (a.size() == 0) throw ParameterError("nmi: empty partitions");
    // Fixed argument order makes the summation order, and so the value, exactly symmetric.
    if (std::lexicographical_compare(b.labels().begin(), b.labels().end(), a.labels().begin(), a.labels().end())) {
        return nmi(b, a, variant);
    }
    const double n = static_cast<double>(a.size());
    std::map<int, double> ca;
    std::map<int, double> cb;
    std::map<std::pair<int, int>, double> joint;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ca[a[static_cast<int>(i)]] += 1.0;
        cb[b[static_cast<int>(i)]] += 1.0;
        joint[{a[static_cast<int>(i)], b[static_cast<int>(i)]}] += 1.0;
    }
    const double base = variant == NmiVariant::standard ? 1.0 : std::log(2.0);
    const double ha = entropy(ca, n, base);
    const double hb = entropy(cb, n, base);
    double hab = 0.0;
    for (const auto& [key, count] : joint) {
        const double p = count / n;
        hab -= p * std::log(p);
    }
    hab /= base;

    if (variant == NmiVariant::paper) {
        // H(A|B) = H(A,B) - H(B)
        return 1.0 - 0.5 * ((hab - hb) + (hab - ha));
    }
    const double mean = 0.5 * (ha + hb);
    if (mean == 0.0) return 1.0; // both partitions trivial
    double mi = 0.0;
    for (const auto& [key, count] : joint) {
        const double p = count / n;
        mi += p * std::log(p / ((ca.at(key.first) / n) * (cb.at(key.second) / n)));
    }
    return std::clamp(mi / mean, 0.0, 1.0);
}

nlohmann::json to_json(const MetricReport& report, const nlohmann::json& inputs) {
    return {{"metric", report.name}, {"value", report.value}, {"convention", report.convention}, {"inputs", inputs}};
}

} // namespace orcpool
