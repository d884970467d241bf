#pragma once

#include <cstdint>
#include <map>

#include "katzsched/cfg.hpp"

namespace katzsched {

// Historical mutation counters: total mutations T and, per node, how many
// mutations reached one of the node's parents. A mutation reaching two
// parents of the same node counts twice, so reached_parent values may
// exceed total; beta clamping absorbs the excess.
struct MutationStats {
    std::uint64_t total = 0;
    std::map<NodeId, std::uint64_t> reached_parent;

    bool empty() const { return total == 0; }
};

} // namespace katzsched
