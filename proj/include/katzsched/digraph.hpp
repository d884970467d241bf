#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "katzsched/cfg.hpp"

namespace katzsched {

// Mutable directed graph over sparse 64-bit node ids, used for horizon
// graphs and their intermediates. At most one edge per (src, dst) pair;
// inserting an Intra or Call edge over an existing Ret edge upgrades it
// (a back edge justified by a non-return path is no longer just a back
// edge), never the reverse.
class Digraph {
  public:
    void add_node(NodeId id);
    void add_edge(NodeId src, NodeId dst, EdgeKind kind = EdgeKind::Intra);
    void remove_edge(NodeId src, NodeId dst);

    bool has_node(NodeId id) const;
    bool has_edge(NodeId src, NodeId dst) const;

    std::size_t node_count() const { return adj_.size(); }
    std::size_t edge_count() const { return edge_count_; }

    std::vector<NodeId> node_list() const; // ascending
    std::vector<NodeId> out(NodeId id) const; // ascending
    std::size_t out_degree(NodeId id) const;

    // Visits edges in ascending (src, dst) order.
    void for_each_edge(const std::function<void(NodeId, NodeId, EdgeKind)> &fn) const;

    // Ascending-id-rooted deterministic order; nullopt if the graph is cyclic.
    std::optional<std::vector<NodeId>> topo_order() const;
    bool is_dag() const { return topo_order().has_value(); }

  private:
    std::map<NodeId, std::map<NodeId, EdgeKind>> adj_;
    std::size_t edge_count_ = 0;
};

} // namespace katzsched
