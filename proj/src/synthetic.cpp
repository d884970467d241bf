#include "katzsched/synthetic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "katzsched/rng.hpp"

namespace katzsched {

double SyntheticProgram::edge_prob(NodeId src, NodeId dst) const {
    auto it = traverse_prob.find({src, dst});
    if (it == traverse_prob.end()) {
        throw std::invalid_argument("no traverse probability for edge " +
                                    std::to_string(src) + " -> " + std::to_string(dst));
    }
    return it->second;
}

namespace {

// Level of node i in a layered id space: node 0 alone on level 0, the
// rest in contiguous equal blocks.
struct Layers {
    std::uint64_t n;
    std::uint64_t levels;

    std::uint64_t level_of(std::uint64_t i) const {
        if (i == 0) return 0;
        return 1 + (i - 1) * (levels - 1) / (n - 1);
    }
    std::pair<std::uint64_t, std::uint64_t> block(std::uint64_t level) const {
        if (level == 0) return {0, 1};
        std::uint64_t lo = 1 + (level - 1) * (n - 1) / (levels - 1);
        std::uint64_t hi = 1 + level * (n - 1) / (levels - 1);
        return {lo, hi};
    }
};

} // namespace

SyntheticProgram generate_program(const ProgramGenParams &params) {
    if (params.n_nodes < 2) throw std::invalid_argument("need at least 2 nodes");
    if (params.branching < 1) throw std::invalid_argument("branching must be >= 1");
    if (params.depth_bias < 0.0 || params.depth_bias >= 1.0) {
        throw std::invalid_argument("depth_bias must be in [0, 1)");
    }
    if (params.rare_region_nodes + 2 > params.n_nodes) {
        throw std::invalid_argument("rare region leaves fewer than 2 main nodes");
    }

    Rng rng(params.rng_seed);
    const std::uint64_t main_n = params.n_nodes - params.rare_region_nodes;

    // Depth grows with sqrt(n) scaled by the bias; kept moderate so path
    // counts (and with them Katz magnitudes) stay representable.
    const auto depth_limit = static_cast<std::uint64_t>(
        2.0 + params.depth_bias * 2.0 * std::sqrt(static_cast<double>(main_n)));
    Layers layers{main_n, std::clamp<std::uint64_t>(depth_limit, 2, 400)};
    if (layers.levels > main_n) layers.levels = main_n;

    std::set<std::pair<NodeId, NodeId>> edges;
    auto draw_prob = [&] {
        return params.prob_lo + rng.next_double() * (params.prob_hi - params.prob_lo);
    };

    // Spine: every node gets one parent from the previous level, so the
    // graph is connected, rooted at 0, and level-monotone (a DAG).
    for (std::uint64_t i = 1; i < main_n; ++i) {
        const std::uint64_t level = layers.level_of(i);
        auto [lo, hi] = layers.block(level - 1);
        const std::uint64_t parent = lo + rng.uniform_index(hi - lo);
        edges.emplace(parent, i);
    }

    // Extra forward edges, jumping at most a few levels ahead.
    std::uint64_t extra_target;
    if (params.target_edges > 0) {
        if (params.target_edges < main_n - 1) {
            throw std::invalid_argument("target_edges below spanning-tree size");
        }
        extra_target = params.target_edges - (main_n - 1);
        if (params.rare_region_nodes > 0 && extra_target >= params.rare_region_nodes) {
            extra_target -= params.rare_region_nodes; // budget for the rare chain
        }
    } else {
        extra_target = main_n * (params.branching > 1 ? params.branching - 1 : 0) / 2;
    }
    std::uint64_t added = 0;
    std::uint64_t attempts = 0;
    const std::uint64_t max_attempts = 20 * (extra_target + 1);
    while (added < extra_target && attempts < max_attempts) {
        ++attempts;
        const std::uint64_t src = rng.uniform_index(main_n);
        const std::uint64_t src_level = layers.level_of(src);
        if (src_level + 1 >= layers.levels) continue;
        const std::uint64_t max_jump =
            std::min<std::uint64_t>(3, layers.levels - 1 - src_level);
        const std::uint64_t dst_level = src_level + 1 + rng.uniform_index(max_jump);
        auto [lo, hi] = layers.block(dst_level);
        const std::uint64_t dst = lo + rng.uniform_index(hi - lo);
        if (dst <= src) continue; // block boundaries can overlap by one
        if (edges.emplace(src, dst).second) ++added;
    }

    SyntheticProgram program;
    program.rng_seed = params.rng_seed;
    Cfg::Builder builder;
    for (std::uint64_t i = 0; i < params.n_nodes; ++i) builder.add_node(i);
    builder.set_entry(0);
    for (const auto &[src, dst] : edges) {
        builder.add_edge(src, dst, EdgeKind::Intra);
        program.traverse_prob[{src, dst}] = draw_prob();
    }

    // Planted rare region: a hard gateway edge from a mid-depth host into
    // a high-probability chain of dedicated nodes.
    if (params.rare_region_nodes > 0) {
        auto [lo, hi] = layers.block(layers.levels / 3);
        const NodeId host = lo + rng.uniform_index(hi - lo);
        NodeId prev = host;
        double prob = params.rare_gate_prob;
        for (std::uint64_t i = 0; i < params.rare_region_nodes; ++i) {
            const NodeId node = main_n + i;
            builder.add_edge(prev, node, EdgeKind::Intra);
            program.traverse_prob[{prev, node}] = prob;
            prev = node;
            prob = 0.8 + 0.15 * rng.next_double();
        }
    }

    program.cfg = std::move(builder).build();
    return program;
}

SyntheticProgram generate_program(std::uint64_t n_nodes, unsigned branching,
                                  double depth_bias, std::uint64_t rng_seed) {
    ProgramGenParams params;
    params.n_nodes = n_nodes;
    params.branching = branching;
    params.depth_bias = depth_bias;
    params.rng_seed = rng_seed;
    return generate_program(params);
}

namespace {

bool parse_u64_tok(std::string_view token, std::uint64_t &out) {
    if (token.empty()) return false;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    return ec == std::errc() && ptr == token.data() + token.size();
}

} // namespace

SyntheticProgram load_program(std::istream &in, const std::string &filename) {
    std::ostringstream cfg_text;
    std::vector<std::tuple<NodeId, NodeId, double>> probs;
    std::uint64_t rng_seed = 0;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (auto hash = view.find('#'); hash != std::string_view::npos) {
            view = view.substr(0, hash);
        }
        std::istringstream tokens{std::string(view)};
        std::string directive;
        if (!(tokens >> directive)) continue;
        if (directive == "P") {
            std::string src_tok, dst_tok;
            double prob;
            std::uint64_t src, dst;
            if (!(tokens >> src_tok >> dst_tok >> prob) ||
                !parse_u64_tok(src_tok, src) || !parse_u64_tok(dst_tok, dst)) {
                throw ParseError(filename, line_no, "malformed P directive");
            }
            if (prob <= 0.0 || prob > 1.0) {
                throw ParseError(filename, line_no, "probability must be in (0, 1]");
            }
            probs.emplace_back(src, dst, prob);
        } else if (directive == "RNGSEED") {
            std::string tok;
            if (!(tokens >> tok) || !parse_u64_tok(tok, rng_seed)) {
                throw ParseError(filename, line_no, "malformed RNGSEED directive");
            }
        } else {
            cfg_text << line << "\n";
        }
    }

    SyntheticProgram program;
    std::istringstream cfg_in(cfg_text.str());
    program.cfg = Cfg::parse(cfg_in, filename);
    program.rng_seed = rng_seed;
    for (const auto &[src, dst, prob] : probs) {
        if (!program.cfg.contains(src)) throw UnknownNodeError(src);
        if (!program.cfg.contains(dst)) throw UnknownNodeError(dst);
        program.traverse_prob[{src, dst}] = prob;
    }
    for (const CfgEdge &e : program.cfg.edges()) {
        if (!program.traverse_prob.count({e.src, e.dst})) {
            throw std::runtime_error(filename + ": edge " + std::to_string(e.src) +
                                     " -> " + std::to_string(e.dst) +
                                     " has no traverse probability");
        }
    }
    return program;
}

SyntheticProgram load_program_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    return load_program(in, path);
}

std::string serialize_program(const SyntheticProgram &program) {
    std::ostringstream out;
    out << program.cfg.serialize();
    out << "RNGSEED " << program.rng_seed << "\n";
    char buffer[64];
    for (const auto &[edge, prob] : program.traverse_prob) {
        std::snprintf(buffer, sizeof(buffer), "%.17g", prob);
        out << "P " << edge.first << " " << edge.second << " " << buffer << "\n";
    }
    return out.str();
}

} // namespace katzsched
