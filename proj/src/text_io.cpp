#include "katzsched/text_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

namespace katzsched {

namespace {

bool parse_u64_tok(std::string_view token, std::uint64_t &out) {
    if (token.empty()) return false;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    return ec == std::errc() && ptr == token.data() + token.size();
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

std::string_view strip_comment(std::string_view line) {
    auto hash = line.find('#');
    return hash == std::string_view::npos ? line : line.substr(0, hash);
}

} // namespace

TraceMap parse_traces(std::istream &in, const std::string &filename) {
    TraceMap traces;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto tokens = split_ws(strip_comment(line));
        if (tokens.empty()) continue;
        if (tokens[0] != "S") {
            throw ParseError(filename, line_no,
                             "unknown directive '" + std::string(tokens[0]) + "'");
        }
        std::uint64_t seed;
        if (tokens.size() < 2 || !parse_u64_tok(tokens[1], seed)) {
            throw ParseError(filename, line_no, "malformed seed line");
        }
        Trace &trace = traces[seed]; // repeated seed ids merge
        for (std::size_t i = 2; i < tokens.size(); ++i) {
            std::uint64_t node;
            if (!parse_u64_tok(tokens[i], node)) {
                throw ParseError(filename, line_no, "malformed node id");
            }
            trace.insert(node);
        }
    }
    return traces;
}

TraceMap parse_traces_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    return parse_traces(in, path);
}

std::string serialize_traces(const TraceMap &traces) {
    std::ostringstream out;
    for (const auto &[seed, trace] : traces) {
        out << "S " << seed;
        for (NodeId n : trace) out << " " << n;
        out << "\n";
    }
    return out.str();
}

MutationStats parse_stats(std::istream &in, const std::string &filename) {
    MutationStats stats;
    bool have_total = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto tokens = split_ws(strip_comment(line));
        if (tokens.empty()) continue;
        if (tokens[0] == "T") {
            std::uint64_t total;
            if (tokens.size() != 2 || !parse_u64_tok(tokens[1], total)) {
                throw ParseError(filename, line_no, "malformed T line");
            }
            if (have_total) throw ParseError(filename, line_no, "duplicate T line");
            have_total = true;
            stats.total = total;
        } else if (tokens[0] == "R") {
            std::uint64_t node, count;
            if (tokens.size() != 3 || !parse_u64_tok(tokens[1], node) ||
                !parse_u64_tok(tokens[2], count)) {
                throw ParseError(filename, line_no, "malformed R line");
            }
            stats.reached_parent[node] += count;
        } else {
            throw ParseError(filename, line_no,
                             "unknown directive '" + std::string(tokens[0]) + "'");
        }
    }
    if (!have_total) throw ParseError(filename, line_no, "missing T line");
    return stats;
}

MutationStats parse_stats_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    return parse_stats(in, path);
}

std::string serialize_stats(const MutationStats &stats) {
    std::ostringstream out;
    out << "T " << stats.total << "\n";
    for (const auto &[node, count] : stats.reached_parent) {
        out << "R " << node << " " << count << "\n";
    }
    return out.str();
}

std::string dump_edge_horizon_graph(const EdgeHorizonGraph &ehg) {
    std::ostringstream out;
    for (NodeId id : ehg.graph.node_list()) out << "N " << id << "\n";
    ehg.graph.for_each_edge([&](NodeId src, NodeId dst, EdgeKind kind) {
        out << "E " << src << " " << dst << " " << to_string(kind) << "\n";
    });
    for (NodeId id : ehg.horizon_nodes) out << "H " << id << "\n";
    for (const auto &[seed, node] : ehg.seed_nodes) {
        out << "SEED " << seed << " " << node << "\n";
    }
    return out.str();
}

std::string format_score(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

} // namespace katzsched
