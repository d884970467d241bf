#include "katzsched/cfg.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

namespace katzsched {

std::string_view to_string(EdgeKind kind) {
    switch (kind) {
    case EdgeKind::Intra: return "intra";
    case EdgeKind::Call: return "call";
    case EdgeKind::Ret: return "ret";
    }
    return "?";
}

std::optional<EdgeKind> edge_kind_from(std::string_view text) {
    if (text == "intra") return EdgeKind::Intra;
    if (text == "call") return EdgeKind::Call;
    if (text == "ret") return EdgeKind::Ret;
    return std::nullopt;
}

Cfg::Builder &Cfg::Builder::add_node(NodeId id) {
    nodes_.push_back(id);
    return *this;
}

Cfg::Builder &Cfg::Builder::add_edge(NodeId src, NodeId dst, EdgeKind kind) {
    if (src == dst) {
        throw std::invalid_argument("self-edge " + std::to_string(src) +
                                    " -> " + std::to_string(dst) + " is not allowed");
    }
    edges_.push_back(CfgEdge{src, dst, kind});
    return *this;
}

Cfg::Builder &Cfg::Builder::set_entry(NodeId id) {
    entry_ = id;
    return *this;
}

Cfg Cfg::Builder::build() && {
    Cfg cfg;
    cfg.ids_ = std::move(nodes_);
    std::sort(cfg.ids_.begin(), cfg.ids_.end());
    if (std::adjacent_find(cfg.ids_.begin(), cfg.ids_.end()) != cfg.ids_.end()) {
        throw std::invalid_argument("duplicate node declaration");
    }
    if (!entry_) {
        throw std::invalid_argument("missing entry directive");
    }
    if (!std::binary_search(cfg.ids_.begin(), cfg.ids_.end(), *entry_)) {
        throw std::invalid_argument("entry node " + std::to_string(*entry_) +
                                    " is not declared");
    }
    cfg.entry_ = *entry_;

    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    cfg.edges_ = std::move(edges_);

    cfg.out_.assign(cfg.ids_.size(), {});
    cfg.in_.assign(cfg.ids_.size(), {});
    for (const CfgEdge &e : cfg.edges_) {
        auto src_it = std::lower_bound(cfg.ids_.begin(), cfg.ids_.end(), e.src);
        auto dst_it = std::lower_bound(cfg.ids_.begin(), cfg.ids_.end(), e.dst);
        if (src_it == cfg.ids_.end() || *src_it != e.src) {
            throw std::invalid_argument("edge endpoint " + std::to_string(e.src) +
                                        " is not a declared node");
        }
        if (dst_it == cfg.ids_.end() || *dst_it != e.dst) {
            throw std::invalid_argument("edge endpoint " + std::to_string(e.dst) +
                                        " is not a declared node");
        }
        cfg.out_[static_cast<std::size_t>(src_it - cfg.ids_.begin())].push_back(e.dst);
        cfg.in_[static_cast<std::size_t>(dst_it - cfg.ids_.begin())].push_back(e.src);
    }
    // Parallel edges of different kinds collapse in the adjacency view.
    for (auto *lists : {&cfg.out_, &cfg.in_}) {
        for (auto &v : *lists) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        }
    }
    return cfg;
}

namespace {

bool parse_u64(std::string_view token, std::uint64_t &out) {
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

} // namespace

Cfg Cfg::parse(std::istream &in, const std::string &filename) {
    Builder builder;
    bool have_entry = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (auto hash = view.find('#'); hash != std::string_view::npos) {
            view = view.substr(0, hash);
        }
        auto tokens = split_ws(view);
        if (tokens.empty()) continue;

        const std::string_view directive = tokens[0];
        auto fail = [&](const std::string &msg) -> ParseError {
            return ParseError(filename, line_no, msg);
        };
        if (directive == "entry") {
            std::uint64_t id;
            if (tokens.size() != 2 || !parse_u64(tokens[1], id)) {
                throw fail("malformed entry directive");
            }
            if (have_entry) throw fail("duplicate entry directive");
            have_entry = true;
            builder.set_entry(id);
        } else if (directive == "N") {
            std::uint64_t id;
            if (tokens.size() != 2 || !parse_u64(tokens[1], id)) {
                throw fail("malformed node declaration");
            }
            builder.add_node(id);
        } else if (directive == "E") {
            std::uint64_t src, dst;
            if (tokens.size() != 4 || !parse_u64(tokens[1], src) ||
                !parse_u64(tokens[2], dst)) {
                throw fail("malformed edge declaration");
            }
            auto kind = edge_kind_from(tokens[3]);
            if (!kind) {
                throw fail("unknown edge kind '" + std::string(tokens[3]) + "'");
            }
            try {
                builder.add_edge(src, dst, *kind);
            } catch (const std::invalid_argument &e) {
                throw fail(e.what());
            }
        } else {
            throw fail("unknown directive '" + std::string(directive) + "'");
        }
    }
    if (!have_entry) {
        throw ParseError(filename, line_no, "missing entry directive");
    }
    try {
        return std::move(builder).build();
    } catch (const std::invalid_argument &e) {
        throw ParseError(filename, line_no, e.what());
    }
}

Cfg Cfg::parse_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open file: " + path);
    }
    return parse(in, path);
}

bool Cfg::contains(NodeId id) const {
    return std::binary_search(ids_.begin(), ids_.end(), id);
}

std::size_t Cfg::index_of(NodeId id) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) throw UnknownNodeError(id);
    return static_cast<std::size_t>(it - ids_.begin());
}

const std::vector<NodeId> &Cfg::out_neighbors(NodeId id) const {
    return out_[index_of(id)];
}

const std::vector<NodeId> &Cfg::parents(NodeId id) const {
    return in_[index_of(id)];
}

std::string Cfg::serialize() const {
    std::ostringstream out;
    out << "entry " << entry_ << "\n";
    for (NodeId id : ids_) out << "N " << id << "\n";
    for (const CfgEdge &e : edges_) {
        out << "E " << e.src << " " << e.dst << " " << to_string(e.kind) << "\n";
    }
    return out.str();
}

} // namespace katzsched
