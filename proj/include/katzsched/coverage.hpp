#pragma once

#include <cstdint>
#include <map>
#include <set>

#include "katzsched/cfg.hpp"

namespace katzsched {

using SeedId = std::uint64_t;
using Trace = std::set<NodeId>;
using TraceMap = std::map<SeedId, Trace>;

// Per-seed visited node sets plus the global visited/unvisited partition.
// visited is always the union of the traces and unvisited its complement
// in the graph's node set.
struct CoverageCorpus {
    TraceMap traces;
    std::set<NodeId> visited;
    std::set<NodeId> unvisited;

    // No seeds yet; every cfg node is unvisited.
    static CoverageCorpus empty_for(const Cfg &cfg);

    bool is_visited(NodeId id) const { return visited.count(id) != 0; }

    // Merges nodes into the seed's trace (creating the seed if new) and
    // refreshes the partition. Trace nodes must exist in the cfg.
    void add_trace(const Cfg &cfg, SeedId seed, const Trace &nodes);
};

// Partitions cfg nodes into visited/unvisited from the given traces.
// Throws UnknownNodeError if a trace references a node not in the cfg.
CoverageCorpus classify_nodes(const Cfg &cfg, const TraceMap &traces);

} // namespace katzsched
