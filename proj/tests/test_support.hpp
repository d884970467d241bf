#pragma once

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "katzsched/cfg.hpp"
#include "katzsched/coverage.hpp"
#include "katzsched/digraph.hpp"

// Test-only helpers. The oracles here are deliberately written as direct
// definitions (edge scans, DFS) so they stay independent of the library's
// implementation choices.
namespace test_support {

using namespace katzsched;

inline std::string fixture(const std::string &name) {
    return std::string(KATZSCHED_FIXTURE_DIR) + "/" + name;
}

// General random digraph encoded as a Cfg (cycles allowed, mixed kinds).
inline Cfg random_cfg(std::mt19937_64 &rng, std::size_t n, double edge_factor) {
    Cfg::Builder builder;
    for (std::size_t i = 0; i < n; ++i) builder.add_node(i);
    builder.set_entry(0);
    std::set<std::pair<NodeId, NodeId>> used;
    const auto target = static_cast<std::size_t>(edge_factor * static_cast<double>(n));
    std::size_t attempts = 0;
    while (used.size() < target && attempts < 20 * target + 100) {
        ++attempts;
        NodeId src = rng() % n;
        NodeId dst = rng() % n;
        if (src == dst) continue;
        if (!used.emplace(src, dst).second) continue;
        EdgeKind kind = EdgeKind::Intra;
        const auto roll = rng() % 10;
        if (roll == 8) kind = EdgeKind::Call;
        else if (roll == 9) kind = EdgeKind::Ret;
        builder.add_edge(src, dst, kind);
    }
    return std::move(builder).build();
}

// Random DAG with ascending edges and a bounded forward window, so Katz
// magnitudes stay small enough for tight oracle comparisons.
inline Digraph random_dag(std::mt19937_64 &rng, std::size_t n, double edge_factor,
                          std::size_t window = 12) {
    Digraph g;
    for (std::size_t i = 0; i < n; ++i) g.add_node(i);
    const auto target = static_cast<std::size_t>(edge_factor * static_cast<double>(n));
    std::size_t attempts = 0;
    std::size_t added = 0;
    while (added < target && attempts < 20 * target + 100) {
        ++attempts;
        NodeId src = rng() % n;
        NodeId span = 1 + rng() % window;
        NodeId dst = src + span;
        if (dst >= n) continue;
        if (g.has_edge(src, dst)) continue;
        g.add_edge(src, dst);
        ++added;
    }
    return g;
}

// Random corpus: a few seeds, each tracing a random subset of nodes.
inline TraceMap random_traces(std::mt19937_64 &rng, const Cfg &cfg,
                              std::size_t max_seeds = 4) {
    TraceMap traces;
    const auto &nodes = cfg.nodes();
    const std::size_t seeds = 1 + rng() % max_seeds;
    for (std::size_t s = 0; s < seeds; ++s) {
        Trace trace;
        const std::size_t take = rng() % (nodes.size() / 2 + 1);
        for (std::size_t i = 0; i < take; ++i) trace.insert(nodes[rng() % nodes.size()]);
        traces[s] = trace;
    }
    return traces;
}

// Horizon set by direct edge-scan comprehension over every cfg edge.
inline std::set<NodeId> brute_horizon(const Cfg &cfg, const CoverageCorpus &corpus) {
    std::set<NodeId> horizon;
    for (const CfgEdge &e : cfg.edges()) {
        if (corpus.visited.count(e.src) && corpus.unvisited.count(e.dst)) {
            horizon.insert(e.dst);
        }
    }
    return horizon;
}

// Reachability in the cfg by plain DFS.
inline std::set<NodeId> cfg_reachable(const Cfg &cfg, NodeId from) {
    std::set<NodeId> seen{from};
    std::vector<NodeId> stack{from};
    while (!stack.empty()) {
        NodeId u = stack.back();
        stack.pop_back();
        for (NodeId v : cfg.out_neighbors(u)) {
            if (seen.insert(v).second) stack.push_back(v);
        }
    }
    return seen;
}

inline std::set<NodeId> digraph_reachable(const Digraph &g, NodeId from) {
    std::set<NodeId> seen{from};
    std::vector<NodeId> stack{from};
    while (!stack.empty()) {
        NodeId u = stack.back();
        stack.pop_back();
        for (NodeId v : g.out(u)) {
            if (seen.insert(v).second) stack.push_back(v);
        }
    }
    return seen;
}

// Does the cfg have a path u -> ... -> w whose intermediates are all
// visited? Length-1 paths count.
inline bool splice_edge_oracle(const Cfg &cfg, const CoverageCorpus &corpus,
                               NodeId u, NodeId w) {
    std::set<NodeId> seen;
    std::vector<NodeId> stack;
    for (NodeId v : cfg.out_neighbors(u)) {
        if (v == w) return true;
        if (corpus.visited.count(v) && seen.insert(v).second) stack.push_back(v);
    }
    while (!stack.empty()) {
        NodeId x = stack.back();
        stack.pop_back();
        for (NodeId v : cfg.out_neighbors(x)) {
            if (v == w) return true;
            if (corpus.visited.count(v) && seen.insert(v).second) stack.push_back(v);
        }
    }
    return false;
}

// Naive concordant/discordant pair counts.
struct PairCounts {
    long concordant = 0;
    long discordant = 0;
};

inline PairCounts count_pairs(const std::vector<double> &x, const std::vector<double> &y) {
    PairCounts counts;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            double prod = (x[i] - x[j]) * (y[i] - y[j]);
            if (prod > 0) ++counts.concordant;
            else if (prod < 0) ++counts.discordant;
        }
    }
    return counts;
}

} // namespace test_support
