#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>

#include "katzsched/cfg.hpp"

namespace katzsched {

// A generated program: a DAG-shaped cfg plus, per edge, the probability
// that a mutation crossing the edge's source also crosses the edge.
struct SyntheticProgram {
    Cfg cfg;
    std::map<std::pair<NodeId, NodeId>, double> traverse_prob;
    std::uint64_t rng_seed = 0;

    double edge_prob(NodeId src, NodeId dst) const;
};

struct ProgramGenParams {
    std::uint64_t n_nodes = 100;
    unsigned branching = 3;     // max extra out-degree per node
    double depth_bias = 0.5;    // in [0,1); higher favors deeper chains
    std::uint64_t rng_seed = 0;
    std::uint64_t target_edges = 0; // 0 = derive from branching
    // Optional planted rare region: a low-probability gateway edge into a
    // dedicated subgraph of this many nodes (taken from n_nodes).
    std::uint64_t rare_region_nodes = 0;
    double rare_gate_prob = 0.02;
    // Range for ordinary edge probabilities.
    double prob_lo = 0.15;
    double prob_hi = 0.9;
};

// Connected DAG rooted at node 0; deterministic for a fixed rng_seed.
// Edge probabilities are i.i.d. below 1, so the expected k-hop traversal
// probability decays geometrically in k.
SyntheticProgram generate_program(const ProgramGenParams &params);
SyntheticProgram generate_program(std::uint64_t n_nodes, unsigned branching,
                                  double depth_bias, std::uint64_t rng_seed);

// Program file format: the cfg text format plus `P <src> <dst> <prob>`
// lines and an optional `RNGSEED <n>` line.
SyntheticProgram load_program(std::istream &in, const std::string &filename = "<input>");
SyntheticProgram load_program_file(const std::string &path);
std::string serialize_program(const SyntheticProgram &program);

} // namespace katzsched
