#include "katzsched/rank_agreement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace katzsched {

namespace {

// Concordant-minus-discordant pair count (ties contribute nothing).
double pair_statistic(const std::vector<double> &x, const std::vector<double> &y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            const double dx = x[i] - x[j];
            const double dy = y[i] - y[j];
            const double prod = dx * dy;
            if (prod > 0.0) s += 1.0;
            else if (prod < 0.0) s -= 1.0;
        }
    }
    return s;
}

struct TieCounts {
    double pairs = 0.0;        // sum t(t-1)/2
    double v_adj = 0.0;        // sum t(t-1)(2t+5)
    double t1 = 0.0;           // sum t(t-1)
    double t2 = 0.0;           // sum t(t-1)(t-2)
};

TieCounts tie_counts(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    TieCounts counts;
    std::size_t run = 1;
    auto flush = [&](double t) {
        counts.pairs += t * (t - 1) / 2.0;
        counts.v_adj += t * (t - 1) * (2 * t + 5);
        counts.t1 += t * (t - 1);
        counts.t2 += t * (t - 1) * (t - 2);
    };
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] == values[i - 1]) {
            ++run;
        } else {
            flush(static_cast<double>(run));
            run = 1;
        }
    }
    flush(static_cast<double>(run));
    return counts;
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

// Two-sided permutation test over all n! orderings of y.
double exact_p_value(const std::vector<double> &x, std::vector<double> y, double s_observed) {
    std::sort(y.begin(), y.end());
    double hits = 0.0;
    double total = 0.0;
    const double threshold = std::abs(s_observed) - 1e-12;
    do {
        total += 1.0;
        if (std::abs(pair_statistic(x, y)) >= threshold) hits += 1.0;
    } while (std::next_permutation(y.begin(), y.end()));
    return hits / total;
}

} // namespace

RankAgreement kendall_tau(const std::vector<double> &a, const std::vector<double> &b) {
    if (a.size() != b.size()) throw std::invalid_argument("rankings differ in size");
    const std::size_t n = a.size();
    if (n < 2) throw std::invalid_argument("kendall tau needs n >= 2");

    const double s = pair_statistic(a, b);
    const double n0 = static_cast<double>(n) * (n - 1) / 2.0;
    const TieCounts tx = tie_counts(a);
    const TieCounts ty = tie_counts(b);

    RankAgreement agreement;
    agreement.n = n;
    const double denom = std::sqrt((n0 - tx.pairs) * (n0 - ty.pairs));
    if (denom == 0.0) {
        // One ranking is fully tied; there is no order information.
        agreement.tau = 0.0;
        agreement.p_value = 1.0;
        return agreement;
    }
    agreement.tau = s / denom;

    if (n <= 8) {
        agreement.p_value = exact_p_value(a, b, s);
        return agreement;
    }
    const double dn = static_cast<double>(n);
    const double v0 = dn * (dn - 1) * (2 * dn + 5);
    const double v1 = tx.t1 * ty.t1 / (2 * dn * (dn - 1));
    const double v2 = tx.t2 * ty.t2 / (9 * dn * (dn - 1) * (dn - 2));
    const double var_s = (v0 - tx.v_adj - ty.v_adj) / 18.0 + v1 + v2;
    if (var_s <= 0.0) {
        agreement.p_value = 1.0;
        return agreement;
    }
    const double z = s / std::sqrt(var_s);
    agreement.p_value = std::min(1.0, 2.0 * normal_sf(std::abs(z)));
    return agreement;
}

RankAgreement kendall_tau(const std::map<std::uint64_t, double> &ranking_a,
                          const std::map<std::uint64_t, double> &ranking_b) {
    if (ranking_a.size() != ranking_b.size()) {
        throw std::invalid_argument("rankings cover different key sets");
    }
    std::vector<double> a, b;
    a.reserve(ranking_a.size());
    b.reserve(ranking_b.size());
    auto it_b = ranking_b.begin();
    for (auto it_a = ranking_a.begin(); it_a != ranking_a.end(); ++it_a, ++it_b) {
        if (it_a->first != it_b->first) {
            throw std::invalid_argument("rankings cover different key sets");
        }
        a.push_back(it_a->second);
        b.push_back(it_b->second);
    }
    return kendall_tau(a, b);
}

EdgeSet all_edges(const EdgeHorizonGraph &ehg) {
    EdgeSet edges;
    ehg.graph.for_each_edge(
        [&](NodeId src, NodeId dst, EdgeKind) { edges.emplace(src, dst); });
    return edges;
}

std::size_t reachable_edge_oracle(const EdgeHorizonGraph &ehg, SeedId seed,
                                  const EdgeSet &feasible) {
    auto it = ehg.seed_nodes.find(seed);
    if (it == ehg.seed_nodes.end()) throw UnknownSeedError(seed);

    std::set<NodeId> visited{it->second};
    std::vector<NodeId> stack{it->second};
    std::size_t count = 0;
    while (!stack.empty()) {
        const NodeId u = stack.back();
        stack.pop_back();
        for (NodeId v : ehg.graph.out(u)) {
            if (!feasible.count({u, v})) continue;
            ++count;
            if (visited.insert(v).second) stack.push_back(v);
        }
    }
    return count;
}

} // namespace katzsched
