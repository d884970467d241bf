#include "katzsched/digraph.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace katzsched {

void Digraph::add_node(NodeId id) {
    adj_.try_emplace(id);
}

void Digraph::add_edge(NodeId src, NodeId dst, EdgeKind kind) {
    auto src_it = adj_.find(src);
    if (src_it == adj_.end()) throw UnknownNodeError(src);
    if (adj_.find(dst) == adj_.end()) throw UnknownNodeError(dst);
    auto [edge_it, inserted] = src_it->second.try_emplace(dst, kind);
    if (inserted) {
        ++edge_count_;
    } else if (edge_it->second == EdgeKind::Ret && kind != EdgeKind::Ret) {
        edge_it->second = kind;
    }
}

void Digraph::remove_edge(NodeId src, NodeId dst) {
    auto it = adj_.find(src);
    if (it == adj_.end()) return;
    if (it->second.erase(dst) > 0) --edge_count_;
}

bool Digraph::has_node(NodeId id) const { return adj_.count(id) != 0; }

bool Digraph::has_edge(NodeId src, NodeId dst) const {
    auto it = adj_.find(src);
    return it != adj_.end() && it->second.count(dst) != 0;
}

std::vector<NodeId> Digraph::node_list() const {
    std::vector<NodeId> out;
    out.reserve(adj_.size());
    for (const auto &[id, _] : adj_) out.push_back(id);
    return out;
}

std::vector<NodeId> Digraph::out(NodeId id) const {
    auto it = adj_.find(id);
    if (it == adj_.end()) throw UnknownNodeError(id);
    std::vector<NodeId> result;
    result.reserve(it->second.size());
    for (const auto &[dst, _] : it->second) result.push_back(dst);
    return result;
}

std::size_t Digraph::out_degree(NodeId id) const {
    auto it = adj_.find(id);
    if (it == adj_.end()) throw UnknownNodeError(id);
    return it->second.size();
}

void Digraph::for_each_edge(
    const std::function<void(NodeId, NodeId, EdgeKind)> &fn) const {
    for (const auto &[src, succ] : adj_) {
        for (const auto &[dst, kind] : succ) fn(src, dst, kind);
    }
}

std::optional<std::vector<NodeId>> Digraph::topo_order() const {
    std::map<NodeId, std::size_t> indeg;
    for (const auto &[id, _] : adj_) indeg[id] = 0;
    for (const auto &[src, succ] : adj_) {
        for (const auto &[dst, _] : succ) ++indeg[dst];
    }
    // Min-heap over node ids keeps the order deterministic.
    std::priority_queue<NodeId, std::vector<NodeId>, std::greater<NodeId>> ready;
    for (const auto &[id, d] : indeg) {
        if (d == 0) ready.push(id);
    }
    std::vector<NodeId> order;
    order.reserve(adj_.size());
    while (!ready.empty()) {
        NodeId id = ready.top();
        ready.pop();
        order.push_back(id);
        for (const auto &[dst, _] : adj_.at(id)) {
            if (--indeg[dst] == 0) ready.push(dst);
        }
    }
    if (order.size() != adj_.size()) return std::nullopt;
    return order;
}

} // namespace katzsched
