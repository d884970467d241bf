#include "katzsched/horizon.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace katzsched {

std::set<NodeId> horizon_nodes(const Cfg &cfg, const CoverageCorpus &corpus) {
    std::set<NodeId> horizon;
    for (NodeId v : corpus.visited) {
        for (NodeId child : cfg.out_neighbors(v)) {
            if (!corpus.is_visited(child)) horizon.insert(child);
        }
    }
    return horizon;
}

namespace {

NodeId fresh_id_base(const Cfg &cfg) {
    return cfg.nodes().empty() ? 1 : cfg.nodes().back() + 1;
}

} // namespace

EdgeHorizonGraph insert_seed_nodes(const Cfg &cfg, const CoverageCorpus &corpus,
                                   const std::set<NodeId> &horizon) {
    EdgeHorizonGraph ehg;
    for (NodeId h : horizon) {
        ehg.graph.add_node(h);
        ehg.horizon_nodes.insert(h);
        ehg.origin.emplace(h, h);
    }
    NodeId next = fresh_id_base(cfg);
    for (const auto &[seed, trace] : corpus.traces) {
        NodeId seed_node = next++;
        ehg.graph.add_node(seed_node);
        ehg.seed_nodes.emplace(seed, seed_node);
        for (NodeId v : trace) {
            for (NodeId child : cfg.out_neighbors(v)) {
                if (horizon.count(child)) ehg.graph.add_edge(seed_node, child);
            }
        }
    }
    return ehg;
}

Digraph splice_visited(const Cfg &cfg, const CoverageCorpus &corpus) {
    Digraph out;
    for (NodeId u : corpus.unvisited) out.add_node(u);

    // Direct unvisited-to-unvisited edges keep their kind.
    for (const CfgEdge &e : cfg.edges()) {
        if (!corpus.is_visited(e.src) && !corpus.is_visited(e.dst)) {
            out.add_edge(e.src, e.dst, e.kind);
        }
    }

    // Entry points: visited nodes with an unvisited parent. Only their
    // reach sets are needed.
    std::unordered_set<NodeId> entry_points;
    for (NodeId u : corpus.unvisited) {
        for (NodeId child : cfg.out_neighbors(u)) {
            if (corpus.is_visited(child)) entry_points.insert(child);
        }
    }
    if (entry_points.empty()) return out;

    // Reach(v) for visited v: unvisited nodes first hit by walks from v
    // that stay inside the visited region. Computed bottom-up over the
    // condensation of the visited-induced subgraph (Tarjan), so cycles
    // among visited nodes are handled.
    std::vector<NodeId> vnodes(corpus.visited.begin(), corpus.visited.end());
    std::unordered_map<NodeId, std::size_t> vindex;
    vindex.reserve(vnodes.size());
    for (std::size_t i = 0; i < vnodes.size(); ++i) vindex.emplace(vnodes[i], i);

    const std::size_t n = vnodes.size();
    std::vector<int> comp(n, -1);
    {
        // Iterative Tarjan SCC over visited nodes.
        std::vector<std::size_t> low(n, 0), disc(n, 0);
        std::vector<bool> on_stack(n, false);
        std::vector<std::size_t> scc_stack;
        std::size_t timer = 1;
        int comp_count = 0;
        struct Frame {
            std::size_t node;
            std::size_t child_pos;
        };
        for (std::size_t start = 0; start < n; ++start) {
            if (disc[start] != 0) continue;
            std::vector<Frame> stack{{start, 0}};
            while (!stack.empty()) {
                auto &[node, pos] = stack.back();
                if (pos == 0) {
                    disc[node] = low[node] = timer++;
                    scc_stack.push_back(node);
                    on_stack[node] = true;
                }
                const auto &succ = cfg.out_neighbors(vnodes[node]);
                bool descended = false;
                while (pos < succ.size()) {
                    auto it = vindex.find(succ[pos]);
                    ++pos;
                    if (it == vindex.end()) continue; // leaves the visited region
                    std::size_t w = it->second;
                    if (disc[w] == 0) {
                        stack.push_back({w, 0});
                        descended = true;
                        break;
                    }
                    if (on_stack[w]) low[node] = std::min(low[node], disc[w]);
                }
                if (descended) continue;
                if (low[node] == disc[node]) {
                    while (true) {
                        std::size_t w = scc_stack.back();
                        scc_stack.pop_back();
                        on_stack[w] = false;
                        comp[w] = comp_count;
                        if (w == node) break;
                    }
                    ++comp_count;
                }
                std::size_t finished = node;
                stack.pop_back();
                if (!stack.empty()) {
                    auto &parent = stack.back();
                    low[parent.node] = std::min(low[parent.node], low[finished]);
                }
            }
        }

        int comp_count_total = comp_count;
        // Tarjan emits components in reverse topological order, so comp
        // index 0, 1, ... is already a valid processing order.
        std::vector<std::vector<NodeId>> reach(static_cast<std::size_t>(comp_count_total));
        std::vector<std::vector<int>> comp_succ(static_cast<std::size_t>(comp_count_total));
        for (std::size_t i = 0; i < n; ++i) {
            for (NodeId child : cfg.out_neighbors(vnodes[i])) {
                auto it = vindex.find(child);
                if (it == vindex.end()) {
                    reach[static_cast<std::size_t>(comp[i])].push_back(child);
                } else if (comp[it->second] != comp[i]) {
                    comp_succ[static_cast<std::size_t>(comp[i])].push_back(comp[it->second]);
                }
            }
        }
        auto dedup = [](std::vector<NodeId> &v) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        };
        for (int c = 0; c < comp_count_total; ++c) {
            auto &succ = comp_succ[static_cast<std::size_t>(c)];
            std::sort(succ.begin(), succ.end());
            succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
            auto &r = reach[static_cast<std::size_t>(c)];
            for (int child : succ) {
                const auto &cr = reach[static_cast<std::size_t>(child)];
                r.insert(r.end(), cr.begin(), cr.end());
            }
            dedup(r);
        }

        // Frontier pairs: unvisited u with an edge into entry point v get
        // an edge to everything v first-reaches.
        for (NodeId u : corpus.unvisited) {
            for (NodeId child : cfg.out_neighbors(u)) {
                auto it = vindex.find(child);
                if (it == vindex.end()) continue;
                // w == u yields a self-edge (a loop through the visited
                // region); remove_loops drops it later.
                for (NodeId w : reach[static_cast<std::size_t>(comp[it->second])]) {
                    out.add_edge(u, w, EdgeKind::Intra);
                }
            }
        }
    }
    return out;
}

Digraph remove_loops(Digraph g) {
    // Ret edges go first; they are the callee-to-caller back edges.
    std::vector<std::pair<NodeId, NodeId>> rets;
    g.for_each_edge([&](NodeId src, NodeId dst, EdgeKind kind) {
        if (kind == EdgeKind::Ret) rets.emplace_back(src, dst);
    });
    for (const auto &[src, dst] : rets) g.remove_edge(src, dst);

    const std::vector<NodeId> nodes = g.node_list();
    std::map<NodeId, std::size_t> indeg;
    for (NodeId id : nodes) indeg[id] = 0;
    g.for_each_edge([&](NodeId, NodeId dst, EdgeKind) { ++indeg[dst]; });

    enum class Color { White, Gray, Black };
    std::map<NodeId, Color> color;
    for (NodeId id : nodes) color[id] = Color::White;

    std::vector<std::pair<NodeId, NodeId>> back_edges;
    struct Frame {
        NodeId node;
        std::vector<NodeId> succ;
        std::size_t pos;
    };
    auto dfs_from = [&](NodeId root) {
        if (color[root] != Color::White) return;
        std::vector<Frame> stack;
        stack.push_back({root, g.out(root), 0});
        color[root] = Color::Gray;
        while (!stack.empty()) {
            Frame &frame = stack.back();
            bool descended = false;
            while (frame.pos < frame.succ.size()) {
                NodeId next = frame.succ[frame.pos++];
                Color c = color[next];
                if (c == Color::Gray) {
                    back_edges.emplace_back(frame.node, next);
                } else if (c == Color::White) {
                    color[next] = Color::Gray;
                    stack.push_back({next, g.out(next), 0});
                    descended = true;
                    break;
                }
            }
            if (!descended) {
                color[stack.back().node] = Color::Black;
                stack.pop_back();
            }
        }
    };
    // Roots: zero-in-degree nodes ascending, then any untouched node
    // ascending (fully cyclic regions have no zero-in-degree entry).
    for (NodeId id : nodes) {
        if (indeg[id] == 0) dfs_from(id);
    }
    for (NodeId id : nodes) dfs_from(id);

    for (const auto &[src, dst] : back_edges) g.remove_edge(src, dst);
    return g;
}

EdgeHorizonGraph build_edge_horizon_graph(const Cfg &cfg, const TraceMap &traces) {
    return build_edge_horizon_graph(cfg, classify_nodes(cfg, traces));
}

EdgeHorizonGraph build_edge_horizon_graph(const Cfg &cfg, const CoverageCorpus &corpus) {
    if (corpus.visited.empty()) throw NoCoverageError();
    std::set<NodeId> horizon = horizon_nodes(cfg, corpus);
    EdgeHorizonGraph ehg = insert_seed_nodes(cfg, corpus, horizon);
    Digraph spliced = splice_visited(cfg, corpus);
    for (NodeId u : spliced.node_list()) {
        if (!ehg.graph.has_node(u)) {
            ehg.graph.add_node(u);
            ehg.origin.emplace(u, u);
        }
    }
    spliced.for_each_edge([&](NodeId src, NodeId dst, EdgeKind kind) {
        ehg.graph.add_edge(src, dst, kind);
    });
    ehg.graph = remove_loops(std::move(ehg.graph));
    return ehg;
}

} // namespace katzsched
