#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "katzsched/centrality.hpp"
#include "katzsched/coverage.hpp"
#include "katzsched/horizon.hpp"
#include "katzsched/mutation_stats.hpp"
#include "katzsched/rng.hpp"

namespace katzsched {

enum class ScheduleMode {
    Probabilistic, // selection probability proportional to centrality
    EnergyQueue,   // every seed each cycle, mutation budget from centrality
};

std::string_view to_string(ScheduleMode mode);
std::optional<ScheduleMode> schedule_mode_from(std::string_view text);

struct RankedSeed {
    SeedId seed;
    double score;
    double energy;
};

// Descending score, ties ascending seed id. In Probabilistic mode the
// energies form a distribution whenever any score is positive.
struct SeedRanking {
    ScheduleMode mode = ScheduleMode::Probabilistic;
    std::vector<RankedSeed> entries;
};

// One scheduling round's worth of mutation results. reach_counts maps a
// node to the number of the batch's mutations that reached it.
struct MutationBatch {
    std::uint64_t size = 0;
    std::map<NodeId, std::uint64_t> reach_counts;
    std::set<NodeId> new_nodes;
};

struct SchedulerState {
    CoverageCorpus corpus;
    MutationStats stats;
    std::optional<SeedRanking> ranking;
    std::uint64_t rounds_since_rebuild = 0;
    std::uint64_t rebuild_interval = 100;
    bool has_new_coverage = false;
    ScheduleMode mode = ScheduleMode::Probabilistic;
    std::uint64_t queue_cursor = 0;
};

// True when new coverage arrived, no mutation stats exist yet, or the
// round cadence expired.
bool should_recompute(const SchedulerState &state);

// Projects centrality onto the corpus seeds and assigns energies.
// Probabilistic: energy = score / total (uniform when the total is 0).
// EnergyQueue: energy = raw score. Throws StaleCentralityError when the
// centrality vector does not cover every seed node.
SeedRanking rank_seeds(const EdgeHorizonGraph &ehg, const CentralityVector &c,
                       ScheduleMode mode);

// Probabilistic: samples proportional to energy. EnergyQueue: round-robin
// cursor over the ranking (descending-score order), every seed once per
// cycle. Throws std::invalid_argument on an empty ranking.
SeedId choose_seed(const SeedRanking &ranking, Rng &rng, std::uint64_t &queue_cursor);

// Mutation budget for one selection. Probabilistic carries the bias in
// the selection frequency, so the budget is flat; EnergyQueue scales by
// score/mean(score), clamped to [1, max_energy_factor * base_budget].
std::uint64_t compute_energy(SeedId seed, const SeedRanking &ranking,
                             std::uint64_t base_budget, double max_energy_factor = 16.0);

// Folds one batch into the state: bumps T, credits reached parents to
// their horizon children, merges newly covered nodes into the scheduled
// seed's trace, sets has_new_coverage, and advances the round counter.
void record_mutation_batch(SchedulerState &state, const Cfg &cfg,
                           const std::set<NodeId> &horizon, SeedId seed,
                           const MutationBatch &batch);

} // namespace katzsched
