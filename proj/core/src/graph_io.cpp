#include "orcpool/graph_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "orcpool/errors.hpp"

namespace orcpool::io {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        const auto first = field.find_first_not_of(" \t\r");
        const auto last = field.find_last_not_of(" \t\r");
        out.push_back(first == std::string::npos ? std::string() : field.substr(first, last - first + 1));
    }
    return out;
}

bool parse_real(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

bool parse_int(const std::string& s, long long& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

bool blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(fmt::format("cannot open '{}'", path.string()));
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

} // namespace

std::string format_real(double x) { return fmt::format("{}", x); }

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError(fmt::format("cannot open '{}'", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError(fmt::format("cannot write '{}'", path.string()));
    out << contents;
    if (!out) throw ValidationError(fmt::format("write failed for '{}'", path.string()));
}

nlohmann::json graph_to_json(const Graph& g) {
    nlohmann::json doc;
    doc["n"] = g.node_count();
    auto edges = nlohmann::json::array();
    for (const Edge& e : g.edges()) edges.push_back({e.u, e.v, e.weight});
    doc["edges"] = std::move(edges);
    if (g.attributes()) {
        const auto& x = *g.attributes();
        auto rows = nlohmann::json::array();
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            auto row = nlohmann::json::array();
            for (Eigen::Index k = 0; k < x.cols(); ++k) row.push_back(x(i, k));
            rows.push_back(std::move(row));
        }
        doc["attributes"] = std::move(rows);
    }
    if (g.labels()) {
        doc["labels"] = std::vector<int>(g.labels()->labels().begin(), g.labels()->labels().end());
    }
    return doc;
}

Graph graph_from_json(const nlohmann::json& doc) {
    try {
        if (!doc.is_object()) throw ValidationError("graph json: top level must be an object");
        if (!doc.contains("n") || !doc["n"].is_number_integer()) {
            throw ValidationError("graph json: missing integer field 'n'");
        }
        const int n = doc["n"].get<int>();
        std::vector<Edge> edges;
        if (doc.contains("edges")) {
            const auto& arr = doc["edges"];
            if (!arr.is_array()) throw ValidationError("graph json: 'edges' must be an array");
            for (std::size_t i = 0; i < arr.size(); ++i) {
                const auto& e = arr[i];
                if (!e.is_array() || e.size() < 2 || e.size() > 3 || !e[0].is_number_integer() ||
                    !e[1].is_number_integer() || (e.size() == 3 && !e[2].is_number())) {
                    throw ValidationError(fmt::format("graph json: edge {} must be [u, v] or [u, v, w]", i));
                }
                edges.push_back({e[0].get<int>(), e[1].get<int>(), e.size() == 3 ? e[2].get<double>() : 1.0});
            }
        }
        std::optional<Eigen::MatrixXd> attributes;
        if (doc.contains("attributes") && !doc["attributes"].is_null()) {
            const auto& rows = doc["attributes"];
            if (!rows.is_array()) throw ValidationError("graph json: 'attributes' must be an array of rows");
            const std::size_t cols = rows.empty() ? 0 : rows[0].size();
            attributes = Eigen::MatrixXd(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (!rows[i].is_array() || rows[i].size() != cols) {
                    throw ValidationError(fmt::format("graph json: attribute row {} has wrong length", i));
                }
                for (std::size_t k = 0; k < cols; ++k) {
                    if (!rows[i][k].is_number()) {
                        throw ValidationError(fmt::format("graph json: attribute ({}, {}) is not a number", i, k));
                    }
                    (*attributes)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k].get<double>();
                }
            }
        }
        std::optional<Partition> labels;
        if (doc.contains("labels") && !doc["labels"].is_null()) {
            if (!doc["labels"].is_array()) throw ValidationError("graph json: 'labels' must be an array");
            std::vector<int> l;
            for (const auto& x : doc["labels"]) {
                if (!x.is_number_integer()) throw ValidationError("graph json: labels must be integers");
                l.push_back(x.get<int>());
            }
            labels = Partition(std::move(l));
        }
        return Graph::build(n, edges, std::move(attributes), std::move(labels));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(fmt::format("graph json: {}", e.what()));
    }
}

void write_graph_json(const Graph& g, const std::filesystem::path& path, const nlohmann::json& extra) {
    nlohmann::json doc = graph_to_json(g);
    for (auto it = extra.begin(); it != extra.end(); ++it) doc[it.key()] = it.value();
    write_text_file(path, doc.dump() + "\n");
}

Graph read_graph_json(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(fmt::format("'{}': {}", path.string(), e.what()));
    }
    return graph_from_json(doc);
}

Graph read_edge_list_csv(const std::filesystem::path& path, std::optional<int> node_count) {
    const auto lines = read_lines(path);
    std::vector<Edge> edges;
    int max_id = -1;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (blank(lines[i])) continue;
        const auto fields = split_csv_line(lines[i]);
        long long u = 0;
        long long v = 0;
        if (fields.size() < 2 || fields.size() > 3 || !parse_int(fields[0], u) || !parse_int(fields[1], v)) {
            if (edges.empty() && i == 0) continue; // header
            throw ValidationError(fmt::format("{}:{}: expected u,v[,w]", path.string(), i + 1));
        }
        double w = 1.0;
        if (fields.size() == 3 && !parse_real(fields[2], w)) {
            throw ValidationError(fmt::format("{}:{}: bad weight '{}'", path.string(), i + 1, fields[2]));
        }
        edges.push_back({static_cast<int>(u), static_cast<int>(v), w});
        max_id = std::max<int>(max_id, static_cast<int>(std::max(u, v)));
    }
    return Graph::build(node_count.value_or(max_id + 1), edges);
}

Eigen::MatrixXd read_attributes_csv(const std::filesystem::path& path) {
    const auto lines = read_lines(path);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (blank(lines[i])) continue;
        const auto fields = split_csv_line(lines[i]);
        std::vector<double> row;
        bool numeric = true;
        for (const auto& f : fields) {
            double x = 0.0;
            if (!parse_real(f, x)) {
                numeric = false;
                break;
            }
            row.push_back(x);
        }
        if (!numeric) {
            if (rows.empty() && i == 0) continue; // header
            throw ValidationError(fmt::format("{}:{}: non-numeric attribute", path.string(), i + 1));
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ValidationError(fmt::format("{}:{}: expected {} columns", path.string(), i + 1, rows.front().size()));
        }
        rows.push_back(std::move(row));
    }
    const auto cols = rows.empty() ? 0 : rows.front().size();
    Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t k = 0; k < cols; ++k) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
    }
    return x;
}

Partition read_partition_csv(const std::filesystem::path& path) {
    const auto lines = read_lines(path);
    std::vector<std::pair<long long, long long>> rows;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (blank(lines[i])) continue;
        const auto fields = split_csv_line(lines[i]);
        long long node = 0;
        long long label = 0;
        if (fields.size() != 2 || !parse_int(fields[0], node) || !parse_int(fields[1], label)) {
            if (rows.empty() && i == 0) continue; // header
            throw ValidationError(fmt::format("{}:{}: expected node,label", path.string(), i + 1));
        }
        rows.emplace_back(node, label);
    }
    std::vector<int> labels(rows.size(), -1);
    for (auto [node, label] : rows) {
        if (node < 0 || node >= static_cast<long long>(rows.size())) {
            throw ValidationError(fmt::format("{}: node {} out of range", path.string(), node));
        }
        if (labels[static_cast<std::size_t>(node)] != -1) {
            throw ValidationError(fmt::format("{}: node {} listed twice", path.string(), node));
        }
        labels[static_cast<std::size_t>(node)] = static_cast<int>(label);
    }
    return Partition(std::move(labels));
}

void write_partition_csv(const Partition& p, std::ostream& out, std::string_view column) {
    out << "node," << column << '\n';
    for (std::size_t i = 0; i < p.size(); ++i) out << i << ',' << p.labels()[i] << '\n';
}

void write_partition_csv(const Partition& p, const std::filesystem::path& path, std::string_view column) {
    std::ostringstream ss;
    write_partition_csv(p, ss, column);
    write_text_file(path, ss.str());
}

Graph load_graph(const std::filesystem::path& path, const std::optional<std::filesystem::path>& attributes) {
    Graph g = path.extension() == ".json" ? read_graph_json(path) : read_edge_list_csv(path);
    if (attributes) g = g.with_attributes(read_attributes_csv(*attributes));
    return g;
}

} // namespace orcpool::io
