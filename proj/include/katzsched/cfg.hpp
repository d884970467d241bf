#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "katzsched/errors.hpp"

namespace katzsched {

using NodeId = std::uint64_t;

enum class EdgeKind { Intra, Call, Ret };

std::string_view to_string(EdgeKind kind);
std::optional<EdgeKind> edge_kind_from(std::string_view text);

struct CfgEdge {
    NodeId src;
    NodeId dst;
    EdgeKind kind;
    auto operator<=>(const CfgEdge &) const = default;
};

// Immutable directed inter-procedural control-flow graph. Safe to share
// across threads once built. Node ids are arbitrary 64-bit values; all
// adjacency queries return ascending-id lists.
class Cfg {
  public:
    class Builder {
      public:
        Builder &add_node(NodeId id);
        // Duplicate (src, dst, kind) triples collapse; self-edges are rejected.
        Builder &add_edge(NodeId src, NodeId dst, EdgeKind kind);
        Builder &set_entry(NodeId id);
        // Validates endpoints and the entry directive; throws std::invalid_argument.
        Cfg build() &&;

      private:
        friend class Cfg;
        std::vector<NodeId> nodes_;
        std::vector<CfgEdge> edges_;
        std::optional<NodeId> entry_;
    };

    // Empty placeholder; real graphs come from parse or Builder::build.
    Cfg() = default;

    // Line-oriented text format; see README. Errors carry file and line.
    static Cfg parse(std::istream &in, const std::string &filename = "<input>");
    static Cfg parse_file(const std::string &path);

    NodeId entry() const { return entry_; }
    std::size_t node_count() const { return ids_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    bool contains(NodeId id) const;

    // Ascending node ids.
    const std::vector<NodeId> &nodes() const { return ids_; }
    // Canonical order: sorted by (src, dst, kind).
    const std::vector<CfgEdge> &edges() const { return edges_; }

    // Distinct successor ids in ascending order; kind-agnostic.
    const std::vector<NodeId> &out_neighbors(NodeId id) const;
    // Distinct predecessor ids in ascending order; kind-agnostic.
    const std::vector<NodeId> &parents(NodeId id) const;

    // Canonical text form; parse(serialize(g)) reproduces g exactly.
    std::string serialize() const;

  private:
    std::size_t index_of(NodeId id) const; // throws UnknownNodeError

    std::vector<NodeId> ids_; // ascending
    std::vector<CfgEdge> edges_;
    std::vector<std::vector<NodeId>> out_;
    std::vector<std::vector<NodeId>> in_;
    NodeId entry_ = 0;
};

} // namespace katzsched
