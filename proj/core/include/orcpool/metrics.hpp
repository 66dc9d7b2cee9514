#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "orcpool/graph.hpp"

namespace orcpool {

enum class ModularityConvention {
    ordered,   // Newman-Girvan: ordered node pairs, normalizer 2 * total weight
    unordered, // each edge once, normalizer total weight, non-adjacent pairs ignored
};

enum class NmiVariant {
    standard, // mutual information over the mean entropy, natural log
    paper,    // 1 - (H(A|B) + H(B|A)) / 2 in bits; can be negative
};

std::string_view to_string(ModularityConvention c);
ModularityConvention parse_modularity_convention(std::string_view name);
std::string_view to_string(NmiVariant v);
NmiVariant parse_nmi_variant(std::string_view name);

// Weighted modularity of `labels` on the edge weights of `g`. A graph without
// edges has modularity 0.
double modularity(const Graph& g, const Partition& labels,
                  ModularityConvention convention = ModularityConvention::ordered);

double nmi(const Partition& a, const Partition& b, NmiVariant variant = NmiVariant::standard);

struct MetricReport {
    std::string name;
    double value = 0.0;
    std::string convention;
};

nlohmann::json to_json(const MetricReport& report, const nlohmann::json& inputs = nlohmann::json::object());

} // namespace orcpool
