#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string_view>

#include "katzsched/digraph.hpp"
#include "katzsched/errors.hpp"
#include "katzsched/mutation_stats.hpp"

namespace katzsched {

struct KatzParams {
    double alpha = 0.5;
    double tolerance = 1e-9; // L-inf on successive iterates
    std::uint64_t max_iterations = 1000;
};

// Per-node minimum centrality in [0, 1]; nodes without an entry default
// to 1.0.
class BetaVector {
  public:
    BetaVector() = default;

    void set(NodeId id, double value);
    double value_or_default(NodeId id) const;
    const std::map<NodeId, double> &entries() const { return values_; }

  private:
    std::map<NodeId, double> values_;
};

struct CentralityVector {
    std::map<NodeId, double> scores;
    std::uint64_t iterations_used = 0;
    bool converged = false;
};

enum class CentralityKind { Pagerank, Eigenvector, Degree };

std::string_view to_string(CentralityKind kind);
std::optional<CentralityKind> centrality_kind_from(std::string_view text);

// beta_h = clamp(1 - R_h/T, 0, 1) for horizon nodes; everything else
// defaults to 1. All betas are 1 while no mutations have been recorded
// (T = 0).
BetaVector compute_beta(const std::set<NodeId> &horizon, const MutationStats &stats);

// Out-degree Katz centrality by synchronous power iteration:
// c(0) = beta, c(t) = alpha*A*c(t-1) + beta, stopping when the L-inf
// difference of successive iterates drops below tolerance. Never throws
// on divergence; non-convergence within max_iterations is reported via
// the converged flag. On a DAG convergence is guaranteed within
// longest-path-length + 1 iterations.
CentralityVector katz_power(const Digraph &g, const KatzParams &params,
                            const BetaVector &beta = {});

// Exactly k power-method steps: sum_{j=0..k} alpha^j A^j beta. Matches
// katz_power's t = k iterate bit for bit (same kernel).
CentralityVector truncated_expansion(const Digraph &g, double alpha,
                                     const BetaVector &beta, std::uint64_t k);

// Closed-form scores via a dense solve of (I - alpha*A) c = beta.
// Intended as a test oracle; requires node_count <= 2000. Throws
// SingularSystemError when alpha >= 1/lambda_max.
CentralityVector katz_dense_oracle(const Digraph &g, double alpha,
                                   const BetaVector &beta = {});

// Out-degree baselines: degree counts direct successors; eigenvector is
// the alpha = 1 Katz recurrence with per-step L2 normalization (ranking,
// not magnitude, is the contract); pagerank runs the standard
// damping-0.85 iteration with roles reversed so that a node aggregates
// from its successors, each successor's score diluted by its in-degree.
CentralityVector alt_centrality(const Digraph &g, CentralityKind kind,
                                const KatzParams &params = {},
                                const BetaVector &beta = {});

} // namespace katzsched
