#include <doctest.h>

#include <map>
#include <sstream>

#include "katzsched/simulator.hpp"
#include "katzsched/synthetic.hpp"
#include "test_support.hpp"

using namespace katzsched;

TEST_CASE("generation is deterministic for a fixed seed") {
    const SyntheticProgram a = generate_program(100, 3, 0.5, 42);
    const SyntheticProgram b = generate_program(100, 3, 0.5, 42);
    CHECK(serialize_program(a) == serialize_program(b));
    const SyntheticProgram c = generate_program(100, 3, 0.5, 43);
    CHECK(serialize_program(a) != serialize_program(c));
}

TEST_CASE("the minimal program is a single edge") {
    const SyntheticProgram p = generate_program(2, 2, 0.5, 1);
    CHECK(p.cfg.node_count() == 2);
    CHECK(p.cfg.edge_count() == 1);
    CHECK(p.cfg.out_neighbors(0) == std::vector<NodeId>{1});
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(generate_program(1, 2, 0.5, 0), std::invalid_argument);
    CHECK_THROWS_AS(generate_program(10, 0, 0.5, 0), std::invalid_argument);
    CHECK_THROWS_AS(generate_program(10, 2, 1.0, 0), std::invalid_argument);
    ProgramGenParams params;
    params.n_nodes = 5;
    params.rare_region_nodes = 4;
    CHECK_THROWS_AS(generate_program(params), std::invalid_argument);
}

TEST_CASE("generated programs are connected DAGs rooted at the entry") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 10; ++i) {
        const SyntheticProgram p =
            generate_program(20 + rng() % 300, 2 + rng() % 3, 0.3 + (rng() % 5) * 0.1,
                             rng());
        Digraph g;
        for (NodeId id : p.cfg.nodes()) g.add_node(id);
        for (const CfgEdge &e : p.cfg.edges()) g.add_edge(e.src, e.dst, e.kind);
        CHECK(g.is_dag());
        CHECK(test_support::cfg_reachable(p.cfg, p.cfg.entry()).size() ==
              p.cfg.node_count());
        for (const auto &[edge, prob] : p.traverse_prob) {
            CHECK(prob > 0.0);
            CHECK(prob <= 1.0);
        }
        CHECK(p.traverse_prob.size() == p.cfg.edge_count());
    }
}

TEST_CASE("a target edge count is honored exactly") {
    ProgramGenParams params;
    params.n_nodes = 1000;
    params.target_edges = 3000;
    params.rng_seed = 9;
    const SyntheticProgram p = generate_program(params);
    CHECK(p.cfg.edge_count() == 3000);
}

TEST_CASE("the rare region sits behind a hard gateway") {
    ProgramGenParams params;
    params.n_nodes = 200;
    params.rare_region_nodes = 30;
    params.rare_gate_prob = 0.01;
    params.rng_seed = 11;
    const SyntheticProgram p = generate_program(params);
    // the gateway is the only way into node 170
    const auto &parents = p.cfg.parents(170);
    REQUIRE(parents.size() == 1);
    CHECK(p.edge_prob(parents[0], 170) == doctest::Approx(0.01));
    // the rest of the chain is easy to traverse once inside
    for (NodeId n = 171; n < 200; ++n) {
        REQUIRE(p.cfg.parents(n).size() == 1);
        CHECK(p.edge_prob(p.cfg.parents(n)[0], n) > 0.7);
    }
}

TEST_CASE("programs round-trip through the file format") {
    const SyntheticProgram p = generate_program(60, 3, 0.5, 77);
    std::istringstream in(serialize_program(p));
    const SyntheticProgram again = load_program(in, "round-trip");
    CHECK(serialize_program(again) == serialize_program(p));
    CHECK(again.rng_seed == p.rng_seed);
}

TEST_CASE("a program file missing probabilities is rejected") {
    std::istringstream in("entry 0\nN 0\nN 1\nE 0 1 intra\n");
    CHECK_THROWS_WITH_AS(load_program(in, "bad.prog"),
                         doctest::Contains("no traverse probability"),
                         std::runtime_error);
}

TEST_CASE("mutations reach farther hops with strictly decreasing frequency") {
    const SyntheticProgram p = generate_program(1000, 3, 0.5, 4242);

    // initial corpus: the greedy path used by the campaign runner
    CoverageCorpus corpus = CoverageCorpus::empty_for(p.cfg);
    Rng rng(99);
    {
        // mirror of the campaign's initial seed: follow max-probability edges
        std::set<NodeId> seen{p.cfg.entry()};
        NodeId current = p.cfg.entry();
        Trace trace{current};
        while (true) {
            double best_prob = -1.0;
            NodeId best = 0;
            for (NodeId v : p.cfg.out_neighbors(current)) {
                if (seen.count(v)) continue;
                double prob = p.edge_prob(current, v);
                if (prob > best_prob) {
                    best_prob = prob;
                    best = v;
                }
            }
            if (best_prob < 0.0) break;
            trace.insert(best);
            seen.insert(best);
            current = best;
        }
        corpus.add_trace(p.cfg, 0, trace);
    }
    const Trace base_trace = corpus.traces.at(0);

    // hop distance from the base trace, BFS over the whole cfg
    std::map<NodeId, std::uint64_t> hop;
    {
        std::vector<NodeId> frontier(base_trace.begin(), base_trace.end());
        for (NodeId n : frontier) hop[n] = 0;
        std::uint64_t distance = 0;
        while (!frontier.empty()) {
            ++distance;
            std::vector<NodeId> next;
            for (NodeId u : frontier) {
                for (NodeId v : p.cfg.out_neighbors(u)) {
                    if (hop.emplace(v, distance).second) next.push_back(v);
                }
            }
            frontier = std::move(next);
        }
    }

    // replay the fuzzing process: corpus coverage grows as mutations land
    std::uint64_t reached[4] = {0, 0, 0, 0};
    SeedId next_seed = 1;
    for (int m = 0; m < 10000; ++m) {
        const MutationOutcome outcome =
            simulate_mutation(p, base_trace, corpus.visited, rng);
        std::uint64_t deepest[4] = {0, 0, 0, 0};
        for (NodeId n : outcome.covered) {
            const std::uint64_t h = hop.at(n);
            if (h >= 1 && h <= 3) deepest[h] = 1;
        }
        for (int h = 1; h <= 3; ++h) reached[h] += deepest[h];
        if (!outcome.new_nodes.empty()) {
            corpus.add_trace(p.cfg, next_seed++, outcome.covered);
        }
    }
    CHECK(reached[1] > reached[2]);
    CHECK(reached[2] > reached[3]);
    CHECK(reached[3] > 0);
}
