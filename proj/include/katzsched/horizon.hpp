#pragma once

#include <map>
#include <set>

#include "katzsched/cfg.hpp"
#include "katzsched/coverage.hpp"
#include "katzsched/digraph.hpp"

namespace katzsched {

// DAG of seed nodes, horizon nodes and the remaining unvisited region.
// Unvisited cfg nodes keep their original ids; each seed gets a fresh id
// above the cfg's maximum. origin maps non-seed nodes back to the cfg.
struct EdgeHorizonGraph {
    Digraph graph;
    std::map<SeedId, NodeId> seed_nodes;
    std::set<NodeId> horizon_nodes;
    std::map<NodeId, NodeId> origin;

    bool is_seed_node(NodeId id) const { return origin.find(id) == origin.end(); }
};

// Unvisited nodes with at least one visited parent.
std::set<NodeId> horizon_nodes(const Cfg &cfg, const CoverageCorpus &corpus);

// Seed nodes plus seed->horizon edges. A seed connects to a horizon node
// when some node on the seed's own trace is a cfg parent of it; multiple
// such parents still yield a single edge.
EdgeHorizonGraph insert_seed_nodes(const Cfg &cfg, const CoverageCorpus &corpus,
                                   const std::set<NodeId> &horizon);

// Deletes visited nodes while preserving connectivity among the unvisited:
// the result has node set U and an edge u->w exactly when the cfg has a
// path u -> ... -> w whose intermediate nodes are all visited (direct
// u->w edges included). Synthesized multi-hop edges carry kind Intra.
Digraph splice_visited(const Cfg &cfg, const CoverageCorpus &corpus);

// Drops all Ret edges, then breaks remaining cycles by deleting back
// edges found by a DFS rooted at the zero-in-degree nodes (roots, visit
// order and neighbor order all ascending by node id). Output edge set is
// a subset of the input's; already-acyclic graphs pass through unchanged.
Digraph remove_loops(Digraph g);

// Full construction: classify -> horizon -> insert seeds -> splice
// visited -> remove loops. Throws NoCoverageError when no trace covers
// any node (no horizon exists yet).
EdgeHorizonGraph build_edge_horizon_graph(const Cfg &cfg, const TraceMap &traces);
EdgeHorizonGraph build_edge_horizon_graph(const Cfg &cfg, const CoverageCorpus &corpus);

} // namespace katzsched
