#include "katzsched/simulator.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

#include "katzsched/centrality.hpp"

namespace katzsched {

std::string_view to_string(Strategy strategy) {
    switch (strategy) {
    case Strategy::Katz: return "katz";
    case Strategy::Pagerank: return "pagerank";
    case Strategy::Eigenvector: return "eigenvector";
    case Strategy::Degree: return "degree";
    case Strategy::Random: return "random";
    case Strategy::RoundRobin: return "round_robin";
    }
    return "?";
}

std::optional<Strategy> strategy_from(std::string_view text) {
    if (text == "katz") return Strategy::Katz;
    if (text == "pagerank") return Strategy::Pagerank;
    if (text == "eigenvector") return Strategy::Eigenvector;
    if (text == "degree") return Strategy::Degree;
    if (text == "random") return Strategy::Random;
    if (text == "round_robin") return Strategy::RoundRobin;
    return std::nullopt;
}

namespace {

constexpr std::uint32_t kNoParent = std::numeric_limits<std::uint32_t>::max();

// Dense mutation engine: cfg nodes mapped to contiguous indices, CSR
// adjacency with aligned traverse probabilities, and stamp-based scratch
// so one mutation costs no allocations.
struct Engine {
    const SyntheticProgram &program;
    std::vector<NodeId> ids; // ascending, index <-> NodeId
    std::vector<std::uint32_t> offsets;
    std::vector<std::uint32_t> succ;
    std::vector<double> prob;

    std::vector<std::uint8_t> visited;
    std::uint64_t visited_count = 0;

    // per-mutation scratch
    std::vector<std::uint32_t> stamp;
    std::vector<std::uint32_t> entered_from;
    std::uint32_t token = 0;

    explicit Engine(const SyntheticProgram &prog) : program(prog), ids(prog.cfg.nodes()) {
        const std::size_t n = ids.size();
        offsets.reserve(n + 1);
        offsets.push_back(0);
        for (NodeId id : ids) {
            for (NodeId dst : prog.cfg.out_neighbors(id)) {
                succ.push_back(index_of(dst));
                prob.push_back(prog.edge_prob(id, dst));
            }
            offsets.push_back(static_cast<std::uint32_t>(succ.size()));
        }
        visited.assign(n, 0);
        stamp.assign(n, 0);
        entered_from.assign(n, kNoParent);
    }

    std::uint32_t index_of(NodeId id) const {
        const auto it = std::lower_bound(ids.begin(), ids.end(), id);
        return static_cast<std::uint32_t>(it - ids.begin());
    }

    void mark_visited(std::uint32_t idx) {
        if (!visited[idx]) {
            visited[idx] = 1;
            ++visited_count;
        }
    }

    struct MutationScratch {
        std::vector<std::uint32_t> worklist;
        std::vector<std::uint32_t> extension; // nodes beyond the replayed trace
        std::vector<std::uint32_t> new_nodes;
        std::vector<std::uint32_t> crossed; // CSR edge positions
    };

    // Replays the trace and crosses each untaken out-edge independently
    // with its probability; the walk expands through globally visited
    // nodes and a branch stops at the first globally new node.
    void mutate(const std::vector<std::uint32_t> &trace_idx, Rng &rng,
                MutationScratch &scratch) {
        ++token;
        scratch.worklist.assign(trace_idx.begin(), trace_idx.end());
        scratch.extension.clear();
        scratch.new_nodes.clear();
        scratch.crossed.clear();
        for (std::uint32_t i : trace_idx) {
            stamp[i] = token;
            entered_from[i] = kNoParent;
        }
        std::size_t head = 0;
        while (head < scratch.worklist.size()) {
            const std::uint32_t u = scratch.worklist[head++];
            for (std::uint32_t k = offsets[u]; k < offsets[u + 1]; ++k) {
                const std::uint32_t v = succ[k];
                if (stamp[v] == token) continue;
                if (!rng.bernoulli(prob[k])) continue;
                stamp[v] = token;
                entered_from[v] = u;
                scratch.extension.push_back(v);
                scratch.crossed.push_back(k);
                if (visited[v]) {
                    scratch.worklist.push_back(v);
                } else {
                    scratch.new_nodes.push_back(v);
                }
            }
        }
    }

    // Discovery chain of a node reached by the current mutation: the
    // crossed nodes back to the replayed trace.
    void chain_to_trace(std::uint32_t idx, std::vector<std::uint32_t> &out) const {
        std::uint32_t cur = idx;
        while (cur != kNoParent && entered_from[cur] != kNoParent) {
            out.push_back(cur);
            cur = entered_from[cur];
        }
    }
};

struct CampaignRunner {
    const SyntheticProgram &program;
    Strategy strategy;
    CampaignConfig config;
    Rng rng;
    Engine engine;

    SchedulerState state;
    std::set<NodeId> horizon;            // original node ids
    std::vector<std::uint8_t> horizon_mask; // by dense index
    std::map<SeedId, std::vector<std::uint32_t>> replay; // sorted index traces
    SeedId next_seed = 0;
    CampaignResult result;

    std::vector<std::uint8_t> edge_seen;      // by CSR position
    std::vector<std::uint64_t> round_counts;  // by dense index
    std::vector<std::uint32_t> round_touched;

    CampaignRunner(const SyntheticProgram &prog, Strategy strat,
                   const CampaignConfig &cfg, std::uint64_t rng_seed)
        : program(prog), strategy(strat), config(cfg), rng(rng_seed), engine(prog) {
        state.corpus = CoverageCorpus::empty_for(program.cfg);
        state.rebuild_interval = config.rebuild_interval;
        state.mode = strategy == Strategy::RoundRobin ? ScheduleMode::EnergyQueue
                     : strategy == Strategy::Random   ? ScheduleMode::Probabilistic
                                                      : config.mode;
        horizon_mask.assign(engine.ids.size(), 0);
        edge_seen.assign(engine.succ.size(), 0);
        round_counts.assign(engine.ids.size(), 0);
        result.strategy_name = std::string(to_string(strategy));

        // Initial seed: greedy walk along the most traversable edge.
        std::vector<std::uint32_t> path{engine.index_of(program.cfg.entry())};
        while (true) {
            const std::uint32_t u = path.back();
            double best_prob = -1.0;
            std::uint32_t best = 0;
            std::uint32_t best_edge = 0;
            for (std::uint32_t k = engine.offsets[u]; k < engine.offsets[u + 1]; ++k) {
                const std::uint32_t v = engine.succ[k];
                if (engine.stamp[v] == 1) continue;
                if (engine.prob[k] > best_prob) {
                    best_prob = engine.prob[k];
                    best = v;
                    best_edge = k;
                }
            }
            if (best_prob < 0.0) break;
            engine.stamp[u] = 1; // loop guard; reset below
            edge_seen[best_edge] = 1;
            path.push_back(best);
        }
        std::fill(engine.stamp.begin(), engine.stamp.end(), 0);
        engine.token = 1;
        add_seed(path);
    }

    SeedId add_seed(std::vector<std::uint32_t> trace_idx) {
        std::sort(trace_idx.begin(), trace_idx.end());
        trace_idx.erase(std::unique(trace_idx.begin(), trace_idx.end()), trace_idx.end());
        Trace trace;
        for (std::uint32_t i : trace_idx) {
            trace.insert(engine.ids[i]);
            engine.mark_visited(i);
        }
        const SeedId seed = next_seed++;
        state.corpus.add_trace(program.cfg, seed, trace);
        replay.emplace(seed, std::move(trace_idx));
        return seed;
    }

    bool centrality_driven() const {
        return strategy == Strategy::Katz || strategy == Strategy::Pagerank ||
               strategy == Strategy::Eigenvector || strategy == Strategy::Degree;
    }

    void rebuild() {
        horizon = horizon_nodes(program.cfg, state.corpus);
        std::fill(horizon_mask.begin(), horizon_mask.end(), 0);
        for (NodeId h : horizon) horizon_mask[engine.index_of(h)] = 1;

        if (centrality_driven()) {
            EdgeHorizonGraph ehg = build_edge_horizon_graph(program.cfg, state.corpus);
            const BetaVector beta = compute_beta(horizon, state.stats);
            KatzParams params{config.alpha, config.tolerance, config.max_iterations};
            CentralityVector scores;
            switch (strategy) {
            case Strategy::Katz:
                scores = katz_power(ehg.graph, params, beta);
                break;
            case Strategy::Pagerank:
                scores = alt_centrality(ehg.graph, CentralityKind::Pagerank, params);
                break;
            case Strategy::Eigenvector:
                scores = alt_centrality(ehg.graph, CentralityKind::Eigenvector, params, beta);
                break;
            case Strategy::Degree:
                scores = alt_centrality(ehg.graph, CentralityKind::Degree, params);
                break;
            default:
                break;
            }
            state.ranking = rank_seeds(ehg, scores, state.mode);
        } else {
            SeedRanking ranking;
            ranking.mode = state.mode;
            const double n = static_cast<double>(state.corpus.traces.size());
            for (const auto &[seed, _] : state.corpus.traces) {
                const double energy =
                    state.mode == ScheduleMode::Probabilistic ? 1.0 / n : 0.0;
                ranking.entries.push_back(RankedSeed{seed, 0.0, energy});
            }
            state.ranking = std::move(ranking);
        }
        state.rounds_since_rebuild = 0;
        state.has_new_coverage = false;
    }

    // Equivalent of record_mutation_batch on the dense state: bump T,
    // credit horizon children of every reached node, merge discoveries
    // into the scheduled seed, and advance the round counter.
    void record_round(SeedId seed, std::uint64_t batch_size,
                      const std::vector<std::uint32_t> &new_idx) {
        ++state.rounds_since_rebuild;
        if (batch_size == 0) return;
        state.stats.total += batch_size;
        for (std::uint32_t p : round_touched) {
            const std::uint64_t count = round_counts[p];
            round_counts[p] = 0;
            for (std::uint32_t k = engine.offsets[p]; k < engine.offsets[p + 1]; ++k) {
                const std::uint32_t child = engine.succ[k];
                if (horizon_mask[child]) {
                    state.stats.reached_parent[engine.ids[child]] += count;
                }
            }
        }
        round_touched.clear();
        state.has_new_coverage = !new_idx.empty();
        if (!new_idx.empty()) {
            Trace merged;
            for (std::uint32_t i : new_idx) merged.insert(engine.ids[i]);
            state.corpus.add_trace(program.cfg, seed, merged);
            auto &trace_idx = replay.at(seed);
            trace_idx.insert(trace_idx.end(), new_idx.begin(), new_idx.end());
            std::sort(trace_idx.begin(), trace_idx.end());
            trace_idx.erase(std::unique(trace_idx.begin(), trace_idx.end()),
                            trace_idx.end());
        }
    }

    void touch(std::uint32_t idx, std::uint64_t count = 1) {
        if (round_counts[idx] == 0) round_touched.push_back(idx);
        round_counts[idx] += count;
    }

    void run(std::uint64_t rounds, std::uint64_t base_budget) {
        Engine::MutationScratch scratch;
        std::vector<std::uint32_t> minted;
        for (std::uint64_t round = 0; round < rounds; ++round) {
            if (should_recompute(state)) rebuild();
            const SeedId seed = choose_seed(*state.ranking, rng, state.queue_cursor);
            const std::uint64_t energy = compute_energy(
                seed, *state.ranking, base_budget, config.max_energy_factor);

            std::vector<std::uint32_t> round_new;
            const std::vector<std::uint32_t> &trace_idx = replay.at(seed);
            for (std::uint64_t m = 0; m < energy; ++m) {
                engine.mutate(trace_idx, rng, scratch);
                for (std::uint32_t i : trace_idx) touch(i);
                for (std::uint32_t i : scratch.extension) touch(i);
                for (std::uint32_t k : scratch.crossed) edge_seen[k] = 1;
                if (!scratch.new_nodes.empty()) {
                    // mint a seed: the replayed path plus the discovery chains
                    minted.assign(trace_idx.begin(), trace_idx.end());
                    for (std::uint32_t n : scratch.new_nodes) {
                        engine.chain_to_trace(n, minted);
                        round_new.push_back(n);
                    }
                    add_seed(minted);
                }
            }
            record_round(seed, energy, round_new);
            result.coverage_timeline.emplace_back(round, engine.visited_count);
        }
        result.final_corpus_size = state.corpus.traces.size();
        result.covered_nodes = state.corpus.visited;
        for (std::size_t u = 0; u + 1 < engine.offsets.size(); ++u) {
            for (std::uint32_t k = engine.offsets[u]; k < engine.offsets[u + 1]; ++k) {
                if (edge_seen[k]) {
                    result.covered_edges.emplace(engine.ids[u], engine.ids[engine.succ[k]]);
                }
            }
        }
    }
};

} // namespace

MutationOutcome simulate_mutation(const SyntheticProgram &program, const Trace &seed_trace,
                                  const std::set<NodeId> &visited, Rng &rng) {
    Engine engine(program);
    for (NodeId n : visited) engine.mark_visited(engine.index_of(n));
    std::vector<std::uint32_t> trace_idx;
    trace_idx.reserve(seed_trace.size());
    for (NodeId n : seed_trace) trace_idx.push_back(engine.index_of(n));

    Engine::MutationScratch scratch;
    engine.mutate(trace_idx, rng, scratch);

    MutationOutcome outcome;
    outcome.covered = seed_trace;
    for (std::uint32_t i : scratch.extension) outcome.covered.insert(engine.ids[i]);
    for (std::uint32_t i : scratch.new_nodes) outcome.new_nodes.insert(engine.ids[i]);
    for (std::uint32_t k : scratch.crossed) {
        // recover the source of the crossed edge from the CSR position
        const auto row = std::upper_bound(engine.offsets.begin(), engine.offsets.end(), k) -
                         engine.offsets.begin() - 1;
        outcome.crossed_edges.emplace(engine.ids[static_cast<std::size_t>(row)],
                                      engine.ids[engine.succ[k]]);
    }
    return outcome;
}

CampaignResult simulate_campaign(const SyntheticProgram &program, Strategy strategy,
                                 std::uint64_t rounds, std::uint64_t base_budget,
                                 std::uint64_t rng_seed, const CampaignConfig &config) {
    if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
    CampaignRunner runner(program, strategy, config, rng_seed);
    runner.run(rounds, base_budget);
    return std::move(runner.result);
}

CampaignSnapshot campaign_snapshot(const SyntheticProgram &program, Strategy strategy,
                                   std::uint64_t rounds, std::uint64_t base_budget,
                                   std::uint64_t rng_seed, const CampaignConfig &config) {
    if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
    CampaignRunner runner(program, strategy, config, rng_seed);
    runner.run(rounds, base_budget);
    return CampaignSnapshot{std::move(runner.state.corpus), std::move(runner.state.stats)};
}

} // namespace katzsched
