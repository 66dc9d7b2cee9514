#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "orcpool/graph.hpp"

namespace orcpool::io {

// {"n": N, "edges": [[u, v, w], ...], "attributes": [[...], ...], "labels": [...]}
// Unknown top-level keys are ignored on read.
nlohmann::json graph_to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& doc);

// Writes with shortest round-trip number formatting; `extra` keys are merged
// into the top-level object.
void write_graph_json(const Graph& g, const std::filesystem::path& path,
                      const nlohmann::json& extra = nlohmann::json::object());
Graph read_graph_json(const std::filesystem::path& path);

// u,v[,w] per line; optional header; w defaults to 1. Node count is
// max id + 1 unless given.
Graph read_edge_list_csv(const std::filesystem::path& path, std::optional<int> node_count = std::nullopt);

// One row per node, comma separated reals; an all-non-numeric first line is a header.
Eigen::MatrixXd read_attributes_csv(const std::filesystem::path& path);

// node,<column> rows after a header line; any header is accepted on read.
Partition read_partition_csv(const std::filesystem::path& path);
void write_partition_csv(const Partition& p, const std::filesystem::path& path, std::string_view column = "label");
void write_partition_csv(const Partition& p, std::ostream& out, std::string_view column = "label");

// Dispatches on extension: .json -> graph JSON, anything else -> CSV edge list.
Graph load_graph(const std::filesystem::path& path,
                 const std::optional<std::filesystem::path>& attributes = std::nullopt);

// Shortest representation that parses back to the same double.
std::string format_real(double x);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& contents);

} // namespace orcpool::io
