#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "katzsched/scheduler.hpp"
#include "katzsched/synthetic.hpp"

namespace katzsched {

enum class Strategy { Katz, Pagerank, Eigenvector, Degree, Random, RoundRobin };

std::string_view to_string(Strategy strategy);
std::optional<Strategy> strategy_from(std::string_view text);

struct CampaignConfig {
    double alpha = 0.5;
    double tolerance = 1e-9;
    std::uint64_t max_iterations = 1000;
    ScheduleMode mode = ScheduleMode::Probabilistic;
    std::uint64_t rebuild_interval = 100;
    double max_energy_factor = 16.0;
};

struct CampaignResult {
    // (round, visited node count) per round; non-decreasing.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> coverage_timeline;
    std::uint64_t final_corpus_size = 0;
    std::string strategy_name;
    // Final coverage, used for feasibility sets in agreement experiments.
    std::set<NodeId> covered_nodes;
    std::set<std::pair<NodeId, NodeId>> covered_edges;
};

// One simulated mutation: replays the seed's trace and crosses each
// untaken out-edge independently with its traverse probability. The walk
// keeps expanding through globally visited nodes; reaching a globally
// new node ends that branch of the extension.
struct MutationOutcome {
    std::set<NodeId> covered;
    std::set<NodeId> new_nodes;
    std::set<std::pair<NodeId, NodeId>> crossed_edges;
};

MutationOutcome simulate_mutation(const SyntheticProgram &program, const Trace &seed_trace,
                                  const std::set<NodeId> &visited, Rng &rng);

// Runs the full scheduler loop against the hop-decay mutation model:
// each round picks a seed, spends its budget on mutations that replay
// the seed's trace and cross untaken edges with their per-edge
// probabilities (an extension stops at the first globally new node),
// folds the batch into the stats, and rebuilds ranking per
// should_recompute. New coverage immediately mints a seed whose trace is
// the extended coverage. Deterministic for a fixed rng_seed.
CampaignResult simulate_campaign(const SyntheticProgram &program, Strategy strategy,
                                 std::uint64_t rounds, std::uint64_t base_budget,
                                 std::uint64_t rng_seed, const CampaignConfig &config = {});

// Corpus snapshot after a bounded campaign, for agreement experiments.
struct CampaignSnapshot {
    CoverageCorpus corpus;
    MutationStats stats;
};

CampaignSnapshot campaign_snapshot(const SyntheticProgram &program, Strategy strategy,
                                   std::uint64_t rounds, std::uint64_t base_budget,
                                   std::uint64_t rng_seed, const CampaignConfig &config = {});

} // namespace katzsched
