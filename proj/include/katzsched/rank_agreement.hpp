#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "katzsched/horizon.hpp"

namespace katzsched {

struct RankAgreement {
    double tau = 0.0;     // tie-corrected tau-b
    double p_value = 1.0; // two-sided
    std::size_t n = 0;
};

// Tau-b over two score vectors on the same keys. p-value by exact
// permutation enumeration for n <= 8 and the tie-adjusted normal
// approximation otherwise. Throws std::invalid_argument on a key-set
// mismatch or n < 2. Fully tied inputs yield tau = 0, p = 1.
RankAgreement kendall_tau(const std::map<std::uint64_t, double> &ranking_a,
                          const std::map<std::uint64_t, double> &ranking_b);
RankAgreement kendall_tau(const std::vector<double> &a, const std::vector<double> &b);

using EdgeSet = std::set<std::pair<NodeId, NodeId>>;

EdgeSet all_edges(const EdgeHorizonGraph &ehg);

// Brute-force DFS count of distinct feasible edges reachable from the
// seed's node, traversing only feasible edges. Throws UnknownSeedError.
std::size_t reachable_edge_oracle(const EdgeHorizonGraph &ehg, SeedId seed,
                                  const EdgeSet &feasible);

} // namespace katzsched
