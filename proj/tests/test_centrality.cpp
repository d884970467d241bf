#include <doctest.h>

#include <cmath>

#include "katzsched/centrality.hpp"
#include "katzsched/horizon.hpp"
#include "katzsched/text_io.hpp"
#include "test_support.hpp"

using namespace katzsched;
using test_support::fixture;

namespace {

EdgeHorizonGraph demo_ehg() {
    const Cfg cfg = Cfg::parse_file(fixture("demo.cfg"));
    return build_edge_horizon_graph(cfg, TraceMap{{1, {0}}, {2, {0, 1}}});
}

BetaVector demo_beta() {
    const Cfg cfg = Cfg::parse_file(fixture("demo.cfg"));
    const CoverageCorpus corpus = classify_nodes(cfg, TraceMap{{1, {0}}, {2, {0, 1}}});
    return compute_beta(horizon_nodes(cfg, corpus),
                        parse_stats_file(fixture("demo.stats")));
}

// Longest path length in edges, via topological DP.
std::uint64_t longest_path(const Digraph &g) {
    auto order = g.topo_order();
    REQUIRE(order.has_value());
    std::map<NodeId, std::uint64_t> depth;
    std::uint64_t best = 0;
    for (auto it = order->rbegin(); it != order->rend(); ++it) {
        std::uint64_t d = 0;
        for (NodeId v : g.out(*it)) d = std::max(d, depth[v] + 1);
        depth[*it] = d;
        best = std::max(best, d);
    }
    return best;
}

} // namespace

TEST_CASE("compute_beta reproduces the worked bias values") {
    const BetaVector beta = demo_beta();
    CHECK(beta.value_or_default(2) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(beta.value_or_default(3) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(beta.value_or_default(4) == 1.0);
    CHECK(beta.value_or_default(6) == 1.0); // seed nodes default
}

TEST_CASE("compute_beta with no mutations keeps every bias at one") {
    MutationStats stats;
    const BetaVector beta = compute_beta({2, 3}, stats);
    CHECK(beta.entries().empty());
    CHECK(beta.value_or_default(2) == 1.0);
}

TEST_CASE("compute_beta clamps counters exceeding the total") {
    MutationStats stats;
    stats.total = 100;
    stats.reached_parent[5] = 120;
    const BetaVector beta = compute_beta({5}, stats);
    CHECK(beta.value_or_default(5) == 0.0);
}

TEST_CASE("katz power iteration reproduces the worked example") {
    const EdgeHorizonGraph ehg = demo_ehg();
    const BetaVector beta = demo_beta();
    const CentralityVector cv = katz_power(ehg.graph, KatzParams{}, beta);

    CHECK(cv.converged);
    CHECK(cv.iterations_used <= 3);
    CHECK(cv.scores.at(2) == doctest::Approx(0.3).epsilon(1e-12));  // A
    CHECK(cv.scores.at(3) == doctest::Approx(1.7).epsilon(1e-12));  // B
    CHECK(cv.scores.at(4) == doctest::Approx(1.0).epsilon(1e-12));  // C
    CHECK(cv.scores.at(5) == doctest::Approx(1.0).epsilon(1e-12));  // D
    CHECK(cv.scores.at(6) == doctest::Approx(1.15).epsilon(1e-12)); // s1
    CHECK(cv.scores.at(7) == doctest::Approx(2.0).epsilon(1e-12));  // s2
}

TEST_CASE("the demo iterates match the expected columns step by step") {
    const EdgeHorizonGraph ehg = demo_ehg();
    const BetaVector beta = demo_beta();
    // node order: 2=A, 3=B, 4=C, 5=D, 6=s1, 7=s2
    const std::vector<std::vector<double>> columns = {
        {0.3, 0.7, 1.0, 1.0, 1.0, 1.0},  // t=0
        {0.3, 1.7, 1.0, 1.0, 1.15, 1.5}, // t=1
        {0.3, 1.7, 1.0, 1.0, 1.15, 2.0}, // t=2
        {0.3, 1.7, 1.0, 1.0, 1.15, 2.0}, // t=3
    };
    const std::vector<NodeId> nodes{2, 3, 4, 5, 6, 7};
    for (std::size_t t = 0; t < columns.size(); ++t) {
        const CentralityVector cv = truncated_expansion(ehg.graph, 0.5, beta, t);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            CHECK(cv.scores.at(nodes[i]) == doctest::Approx(columns[t][i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("an edgeless graph converges to beta in one iteration") {
    Digraph g;
    for (NodeId i = 0; i < 4; ++i) g.add_node(i);
    BetaVector beta;
    beta.set(2, 0.25);
    const CentralityVector cv = katz_power(g, KatzParams{0.7, 1e-9, 100}, beta);
    CHECK(cv.converged);
    CHECK(cv.iterations_used == 1);
    CHECK(cv.scores.at(2) == 0.25);
    CHECK(cv.scores.at(0) == 1.0);
}

TEST_CASE("power iteration matches the dense solve on random DAGs") {
    std::mt19937_64 rng(61);
    for (int i = 0; i < 100; ++i) {
        const Digraph g = test_support::random_dag(rng, 2 + rng() % 60, 1.5);
        BetaVector beta;
        for (NodeId id : g.node_list()) {
            if (rng() % 2) beta.set(id, (rng() % 1000) / 1000.0);
        }
        const CentralityVector power = katz_power(g, KatzParams{}, beta);
        const CentralityVector dense = katz_dense_oracle(g, 0.5, beta);
        REQUIRE(power.converged);
        for (const auto &[id, score] : power.scores) {
            CHECK(std::abs(score - dense.scores.at(id)) < 1e-8);
        }
        // one step past the longest path reproduces the power iterate at
        // the nilpotent cutoff, bit for bit (tolerance 0 disables the
        // early exit)
        const std::uint64_t cutoff = longest_path(g) + 1;
        const CentralityVector truncated = truncated_expansion(g, 0.5, beta, cutoff);
        const CentralityVector probe = katz_power(g, KatzParams{0.5, 0.0, cutoff}, beta);
        for (const auto &[id, score] : power.scores) {
            CHECK(truncated.scores.at(id) == probe.scores.at(id));
            CHECK(std::abs(truncated.scores.at(id) - score) <= 1e-9);
        }
    }
}

TEST_CASE("dense oracle agrees with the worked example") {
    const EdgeHorizonGraph ehg = demo_ehg();
    const CentralityVector dense = katz_dense_oracle(ehg.graph, 0.5, demo_beta());
    const CentralityVector power = katz_power(ehg.graph, KatzParams{}, demo_beta());
    for (const auto &[id, score] : power.scores) {
        CHECK(std::abs(score - dense.scores.at(id)) < 1e-9);
    }
}

TEST_CASE("dense oracle with alpha zero returns beta") {
    const EdgeHorizonGraph ehg = demo_ehg();
    const BetaVector beta = demo_beta();
    const CentralityVector dense = katz_dense_oracle(ehg.graph, 0.0, beta);
    for (const auto &[id, score] : dense.scores) {
        CHECK(score == doctest::Approx(beta.value_or_default(id)).epsilon(1e-14));
    }
}

TEST_CASE("dense oracle refuses graphs beyond its size cap") {
    Digraph g;
    for (NodeId i = 0; i < 2001; ++i) g.add_node(i);
    CHECK_THROWS_AS(katz_dense_oracle(g, 0.5, {}), std::invalid_argument);
}

TEST_CASE("dense oracle reports the singular two-cycle at alpha one") {
    // det(I - alpha*A) = 1 - alpha^2, zero exactly at alpha = 1
    Digraph g;
    g.add_node(0);
    g.add_node(1);
    g.add_edge(0, 1);
    g.add_edge(1, 0);
    CHECK_THROWS_AS(katz_dense_oracle(g, 1.0, {}), SingularSystemError);
    CHECK_NOTHROW(katz_dense_oracle(g, 0.9, {}));
}

TEST_CASE("power iteration flags non-convergence without throwing") {
    Digraph g;
    g.add_node(0);
    g.add_node(1);
    g.add_edge(0, 1);
    g.add_edge(1, 0);
    const CentralityVector cv = katz_power(g, KatzParams{1.0, 1e-9, 50}, {});
    CHECK_FALSE(cv.converged);
    CHECK(cv.iterations_used == 50);
}

TEST_CASE("truncated expansion at k=0 is beta") {
    const EdgeHorizonGraph ehg = demo_ehg();
    const BetaVector beta = demo_beta();
    const CentralityVector cv = truncated_expansion(ehg.graph, 0.5, beta, 0);
    for (const auto &[id, score] : cv.scores) {
        CHECK(score == beta.value_or_default(id));
    }
}

TEST_CASE("degree centrality counts direct successors") {
    const EdgeHorizonGraph ehg = demo_ehg();
    const CentralityVector cv = alt_centrality(ehg.graph, CentralityKind::Degree);
    CHECK(cv.scores.at(7) == 2.0); // s2
    CHECK(cv.scores.at(6) == 1.0); // s1
    CHECK(cv.scores.at(3) == 2.0); // B
    CHECK(cv.scores.at(2) == 0.0); // A
    CHECK(cv.scores.at(4) == 0.0); // C
    CHECK(cv.scores.at(5) == 0.0); // D
}

TEST_CASE("pagerank on a single node is one") {
    Digraph g;
    g.add_node(0);
    const CentralityVector cv = alt_centrality(g, CentralityKind::Pagerank);
    CHECK(cv.converged);
    CHECK(cv.scores.at(0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eigenvector and alpha-one katz agree on the top node") {
    std::mt19937_64 rng(67);
    for (int i = 0; i < 20; ++i) {
        const Digraph g = test_support::random_dag(rng, 10, 1.4);
        const CentralityVector eig = alt_centrality(g, CentralityKind::Eigenvector);
        const CentralityVector katz = katz_power(g, KatzParams{1.0, 1e-9, 1000}, {});
        REQUIRE(katz.converged); // nilpotent adjacency
        auto argmax = [](const CentralityVector &cv) {
            NodeId best = cv.scores.begin()->first;
            for (const auto &[id, score] : cv.scores) {
                if (score > cv.scores.at(best)) best = id;
            }
            return best;
        };
        CHECK(argmax(eig) == argmax(katz));
    }
}

TEST_CASE("alt_centrality rejects an empty graph") {
    CHECK_THROWS_AS(alt_centrality(Digraph{}, CentralityKind::Degree),
                    std::invalid_argument);
}

TEST_CASE("adding an out-edge toward positive centrality never hurts") {
    std::mt19937_64 rng(71);
    for (int i = 0; i < 40; ++i) {
        Digraph g = test_support::random_dag(rng, 4 + rng() % 20, 1.3);
        auto nodes = g.node_list();
        NodeId src = nodes[rng() % nodes.size()];
        NodeId dst = nodes[rng() % nodes.size()];
        if (src >= dst || g.has_edge(src, dst)) continue; // keep it a DAG
        const double before = katz_power(g, KatzParams{}, {}).scores.at(src);
        g.add_edge(src, dst);
        const double after = katz_power(g, KatzParams{}, {}).scores.at(src);
        CHECK(after >= before);
    }
}

TEST_CASE("insertion order does not change scores") {
    Digraph forward;
    for (NodeId i = 0; i < 5; ++i) forward.add_node(i);
    forward.add_edge(0, 1);
    forward.add_edge(0, 3);
    forward.add_edge(1, 4);

    Digraph backward;
    for (NodeId i = 5; i-- > 0;) backward.add_node(i);
    backward.add_edge(1, 4);
    backward.add_edge(0, 3);
    backward.add_edge(0, 1);

    const CentralityVector a = katz_power(forward, KatzParams{}, {});
    const CentralityVector b = katz_power(backward, KatzParams{}, {});
    CHECK(a.scores == b.scores);
}

TEST_CASE("raising a horizon node's beta raises its seeds strictly") {
    const EdgeHorizonGraph ehg = demo_ehg();
    BetaVector low = demo_beta();
    BetaVector high = demo_beta();
    high.set(2, 0.9); // horizon node A
    const double s1_low = katz_power(ehg.graph, KatzParams{}, low).scores.at(6);
    const double s1_high = katz_power(ehg.graph, KatzParams{}, high).scores.at(6);
    CHECK(s1_high > s1_low);
}

TEST_CASE("path-graph contributions decay exactly by alpha powers") {
    const double alpha = 0.5;
    for (std::size_t k = 1; k <= 10; ++k) {
        Digraph g;
        for (NodeId i = 0; i <= k; ++i) g.add_node(i);
        for (NodeId i = 0; i < k; ++i) g.add_edge(i, i + 1);
        const CentralityVector cv = katz_power(g, KatzParams{alpha, 1e-12, 100}, {});
        // geometric series: adding node x_k contributes alpha^k to the head
        const double expected = (1.0 - std::pow(alpha, k + 1)) / (1.0 - alpha);
        CHECK(cv.scores.at(0) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("scaling beta scales scores and keeps the argmax") {
    const EdgeHorizonGraph ehg = demo_ehg();
    BetaVector base = demo_beta();
    BetaVector scaled;
    const double lambda = 0.5;
    for (NodeId id : ehg.graph.node_list()) {
        scaled.set(id, lambda * base.value_or_default(id));
    }
    const CentralityVector a = katz_power(ehg.graph, KatzParams{}, base);
    const CentralityVector b = katz_power(ehg.graph, KatzParams{}, scaled);
    for (const auto &[id, score] : a.scores) {
        CHECK(b.scores.at(id) == doctest::Approx(lambda * score).epsilon(1e-12));
    }
}
