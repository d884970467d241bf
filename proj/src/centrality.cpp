#include "katzsched/centrality.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace katzsched {

std::string_view to_string(CentralityKind kind) {
    switch (kind) {
    case CentralityKind::Pagerank: return "pagerank";
    case CentralityKind::Eigenvector: return "eigenvector";
    case CentralityKind::Degree: return "degree";
    }
    return "?";
}

std::optional<CentralityKind> centrality_kind_from(std::string_view text) {
    if (text == "pagerank") return CentralityKind::Pagerank;
    if (text == "eigenvector") return CentralityKind::Eigenvector;
    if (text == "degree") return CentralityKind::Degree;
    return std::nullopt;
}

void BetaVector::set(NodeId id, double value) {
    if (value < 0.0 || !std::isfinite(value)) {
        throw std::invalid_argument("beta must be finite and non-negative");
    }
    values_[id] = value;
}

double BetaVector::value_or_default(NodeId id) const {
    auto it = values_.find(id);
    return it == values_.end() ? 1.0 : it->second;
}

BetaVector compute_beta(const std::set<NodeId> &horizon, const MutationStats &stats) {
    BetaVector beta;
    if (stats.total == 0) return beta; // no mutations yet: everything stays 1
    const double total = static_cast<double>(stats.total);
    for (NodeId h : horizon) {
        auto it = stats.reached_parent.find(h);
        const double reached = it == stats.reached_parent.end()
                                   ? 0.0
                                   : static_cast<double>(it->second);
        // 1 - R/T, computed as (T - R)/T: one rounding instead of two
        beta.set(h, std::clamp((total - reached) / total, 0.0, 1.0));
    }
    return beta;
}

namespace {

// Dense-index view of a Digraph: nodes ascending, successor lists as
// index vectors. Shared by every centrality kernel so iteration order
// (and therefore floating-point results) is identical everywhere.
struct Csr {
    std::vector<NodeId> ids; // ascending
    std::vector<std::size_t> offsets;
    std::vector<std::size_t> succ;

    explicit Csr(const Digraph &g) : ids(g.node_list()) {
        std::size_t edge_total = g.edge_count();
        offsets.reserve(ids.size() + 1);
        succ.reserve(edge_total);
        offsets.push_back(0);
        for (NodeId id : ids) {
            for (NodeId dst : g.out(id)) {
                succ.push_back(index_of(dst));
            }
            offsets.push_back(succ.size());
        }
    }

    std::size_t index_of(NodeId id) const {
        auto it = std::lower_bound(ids.begin(), ids.end(), id);
        return static_cast<std::size_t>(it - ids.begin());
    }

    std::size_t size() const { return ids.size(); }
};

std::vector<double> beta_values(const Csr &csr, const BetaVector &beta) {
    std::vector<double> values(csr.size());
    for (std::size_t i = 0; i < csr.size(); ++i) {
        values[i] = beta.value_or_default(csr.ids[i]);
    }
    return values;
}

void check_beta_keys(const Digraph &g, const BetaVector &beta) {
    for (const auto &[id, _] : beta.entries()) {
        if (!g.has_node(id)) throw UnknownNodeError(id);
    }
}

// One synchronous step: next = alpha*A*prev + beta (out-neighbor sum).
void katz_step(const Csr &csr, double alpha, const std::vector<double> &beta,
               const std::vector<double> &prev, std::vector<double> &next) {
    for (std::size_t i = 0; i < csr.size(); ++i) {
        double sum = 0.0;
        for (std::size_t k = csr.offsets[i]; k < csr.offsets[i + 1]; ++k) {
            sum += prev[csr.succ[k]];
        }
        next[i] = alpha * sum + beta[i];
    }
}

CentralityVector pack(const Csr &csr, const std::vector<double> &values,
                      std::uint64_t iterations, bool converged) {
    CentralityVector result;
    result.iterations_used = iterations;
    result.converged = converged;
    for (std::size_t i = 0; i < csr.size(); ++i) {
        result.scores.emplace(csr.ids[i], values[i]);
    }
    return result;
}

} // namespace

CentralityVector katz_power(const Digraph &g, const KatzParams &params,
                            const BetaVector &beta) {
    check_beta_keys(g, beta);
    Csr csr(g);
    std::vector<double> b = beta_values(csr, beta);
    std::vector<double> current = b;
    std::vector<double> next(csr.size());
    bool converged = csr.size() == 0;
    std::uint64_t t = 0;
    while (t < params.max_iterations && !converged) {
        katz_step(csr, params.alpha, b, current, next);
        ++t;
        double diff = 0.0;
        for (std::size_t i = 0; i < csr.size(); ++i) {
            diff = std::max(diff, std::abs(next[i] - current[i]));
        }
        current.swap(next);
        if (diff < params.tolerance) converged = true;
    }
    return pack(csr, current, t, converged);
}

CentralityVector truncated_expansion(const Digraph &g, double alpha,
                                     const BetaVector &beta, std::uint64_t k) {
    check_beta_keys(g, beta);
    Csr csr(g);
    std::vector<double> b = beta_values(csr, beta);
    std::vector<double> current = b;
    std::vector<double> next(csr.size());
    for (std::uint64_t t = 0; t < k; ++t) {
        katz_step(csr, alpha, b, current, next);
        current.swap(next);
    }
    return pack(csr, current, k, true);
}

CentralityVector katz_dense_oracle(const Digraph &g, double alpha,
                                   const BetaVector &beta) {
    check_beta_keys(g, beta);
    Csr csr(g);
    const auto n = static_cast<Eigen::Index>(csr.size());
    if (n > 2000) {
        throw std::invalid_argument("dense oracle supports at most 2000 nodes");
    }
    if (n == 0) return pack(csr, {}, 0, true);

    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n);
    for (std::size_t i = 0; i < csr.size(); ++i) {
        for (std::size_t k = csr.offsets[i]; k < csr.offsets[i + 1]; ++k) {
            system(static_cast<Eigen::Index>(i),
                   static_cast<Eigen::Index>(csr.succ[k])) -= alpha;
        }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
    if (!lu.isInvertible()) throw SingularSystemError();

    std::vector<double> b = beta_values(csr, beta);
    Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(b.data(), n);
    Eigen::VectorXd solution = lu.solve(rhs);
    std::vector<double> values(solution.data(), solution.data() + n);
    return pack(csr, values, 0, true);
}

namespace {

CentralityVector degree_centrality(const Csr &csr) {
    std::vector<double> values(csr.size());
    for (std::size_t i = 0; i < csr.size(); ++i) {
        values[i] = static_cast<double>(csr.offsets[i + 1] - csr.offsets[i]);
    }
    return pack(csr, values, 1, true);
}

CentralityVector eigenvector_centrality(const Csr &csr, const KatzParams &params,
                                        const std::vector<double> &beta) {
    // The alpha = 1 Katz recurrence in a normalized representation: the
    // state is kept at unit L2 norm and the beta term carries the
    // accumulated scale, so the iteration cannot overflow. On a DAG this
    // is exactly normalized alpha = 1 Katz; on a graph with a growing
    // dominant mode the beta contribution washes out and the direction
    // converges to the dominant eigenvector. Ranking is the contract.
    const std::size_t n = csr.size();
    std::vector<double> current = beta;
    std::vector<double> next(n);
    double beta_scale = 1.0;
    auto l2 = [&](const std::vector<double> &v) {
        double norm = 0.0;
        for (double x : v) norm += x * x;
        return std::sqrt(norm);
    };
    const double norm0 = l2(current);
    if (norm0 > 0.0) {
        for (double &x : current) x /= norm0;
        beta_scale = 1.0 / norm0;
    }
    bool converged = n == 0;
    std::uint64_t t = 0;
    while (t < params.max_iterations && !converged) {
        for (std::size_t i = 0; i < n; ++i) {
            double sum = 0.0;
            for (std::size_t k = csr.offsets[i]; k < csr.offsets[i + 1]; ++k) {
                sum += current[csr.succ[k]];
            }
            next[i] = sum + beta_scale * beta[i];
        }
        const double norm = l2(next);
        if (norm > 0.0) {
            for (double &x : next) x /= norm;
            beta_scale /= norm;
        }
        ++t;
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            diff = std::max(diff, std::abs(next[i] - current[i]));
        }
        current.swap(next);
        if (diff < params.tolerance) converged = true;
    }
    return pack(csr, current, t, converged);
}

CentralityVector pagerank_centrality(const Csr &csr, const KatzParams &params) {
    // Standard damping-0.85 iteration with the flow reversed: node i
    // aggregates from its successors, each successor's score split
    // across the parents competing for it (its in-degree). Nodes with no
    // parents are the dangling ones; their mass is spread uniformly.
    const std::size_t n = csr.size();
    if (n == 0) return CentralityVector{{}, 0, true};
    constexpr double kDamping = 0.85;

    std::vector<double> indeg(n, 0.0);
    for (std::size_t k = 0; k < csr.succ.size(); ++k) indeg[csr.succ[k]] += 1.0;

    std::vector<double> current(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n);
    bool converged = false;
    std::uint64_t t = 0;
    while (t < params.max_iterations && !converged) {
        double dangling = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (indeg[i] == 0.0) dangling += current[i];
        }
        const double base = (1.0 - kDamping) / static_cast<double>(n) +
                            kDamping * dangling / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            double sum = 0.0;
            for (std::size_t k = csr.offsets[i]; k < csr.offsets[i + 1]; ++k) {
                std::size_t j = csr.succ[k];
                sum += current[j] / indeg[j];
            }
            next[i] = base + kDamping * sum;
        }
        ++t;
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            diff = std::max(diff, std::abs(next[i] - current[i]));
        }
        current.swap(next);
        if (diff < params.tolerance) converged = true;
    }
    return pack(csr, current, t, converged);
}

} // namespace

CentralityVector alt_centrality(const Digraph &g, CentralityKind kind,
                                const KatzParams &params, const BetaVector &beta) {
    check_beta_keys(g, beta);
    if (g.node_count() == 0) {
        throw std::invalid_argument("centrality requires a non-empty graph");
    }
    Csr csr(g);
    switch (kind) {
    case CentralityKind::Degree:
        return degree_centrality(csr);
    case CentralityKind::Eigenvector:
        return eigenvector_centrality(csr, params, beta_values(csr, beta));
    case CentralityKind::Pagerank:
        return pagerank_centrality(csr, params);
    }
    throw std::logic_error("unreachable");
}

} // namespace katzsched
