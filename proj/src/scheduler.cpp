#include "katzsched/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace katzsched {

std::string_view to_string(ScheduleMode mode) {
    return mode == ScheduleMode::Probabilistic ? "prob" : "queue";
}

std::optional<ScheduleMode> schedule_mode_from(std::string_view text) {
    if (text == "prob") return ScheduleMode::Probabilistic;
    if (text == "queue") return ScheduleMode::EnergyQueue;
    return std::nullopt;
}

bool should_recompute(const SchedulerState &state) {
    return state.has_new_coverage || state.stats.empty() ||
           state.rounds_since_rebuild >= state.rebuild_interval;
}

SeedRanking rank_seeds(const EdgeHorizonGraph &ehg, const CentralityVector &c,
                       ScheduleMode mode) {
    SeedRanking ranking;
    ranking.mode = mode;
    ranking.entries.reserve(ehg.seed_nodes.size());
    double total = 0.0;
    for (const auto &[seed, node] : ehg.seed_nodes) {
        auto it = c.scores.find(node);
        if (it == c.scores.end()) throw StaleCentralityError();
        ranking.entries.push_back(RankedSeed{seed, it->second, 0.0});
        total += it->second;
    }
    std::stable_sort(ranking.entries.begin(), ranking.entries.end(),
                     [](const RankedSeed &a, const RankedSeed &b) {
                         if (a.score != b.score) return a.score > b.score;
                         return a.seed < b.seed;
                     });
    for (RankedSeed &entry : ranking.entries) {
        if (mode == ScheduleMode::Probabilistic) {
            entry.energy = total > 0.0
                               ? entry.score / total
                               : 1.0 / static_cast<double>(ranking.entries.size());
        } else {
            entry.energy = entry.score;
        }
    }
    return ranking;
}

SeedId choose_seed(const SeedRanking &ranking, Rng &rng, std::uint64_t &queue_cursor) {
    if (ranking.entries.empty()) {
        throw std::invalid_argument("cannot choose from an empty ranking");
    }
    if (ranking.mode == ScheduleMode::EnergyQueue) {
        std::size_t idx = queue_cursor % ranking.entries.size();
        ++queue_cursor;
        return ranking.entries[idx].seed;
    }
    std::vector<double> weights;
    weights.reserve(ranking.entries.size());
    for (const RankedSeed &entry : ranking.entries) weights.push_back(entry.energy);
    return ranking.entries[rng.weighted_index(weights)].seed;
}

std::uint64_t compute_energy(SeedId seed, const SeedRanking &ranking,
                             std::uint64_t base_budget, double max_energy_factor) {
    auto it = std::find_if(ranking.entries.begin(), ranking.entries.end(),
                           [&](const RankedSeed &e) { return e.seed == seed; });
    if (it == ranking.entries.end()) throw UnknownSeedError(seed);
    if (ranking.mode == ScheduleMode::Probabilistic) return base_budget;

    double mean = 0.0;
    for (const RankedSeed &entry : ranking.entries) mean += entry.score;
    mean /= static_cast<double>(ranking.entries.size());
    if (mean <= 0.0) return base_budget;

    const double scaled =
        std::round(static_cast<double>(base_budget) * it->score / mean);
    const double cap = max_energy_factor * static_cast<double>(base_budget);
    return static_cast<std::uint64_t>(std::clamp(scaled, 1.0, cap));
}

void record_mutation_batch(SchedulerState &state, const Cfg &cfg,
                           const std::set<NodeId> &horizon, SeedId seed,
                           const MutationBatch &batch) {
    ++state.rounds_since_rebuild;
    if (batch.size == 0) return;

    state.stats.total += batch.size;
    for (const auto &[node, count] : batch.reach_counts) {
        for (NodeId child : cfg.out_neighbors(node)) {
            if (horizon.count(child)) state.stats.reached_parent[child] += count;
        }
    }
    state.has_new_coverage = !batch.new_nodes.empty();
    if (!batch.new_nodes.empty()) {
        state.corpus.add_trace(cfg, seed, batch.new_nodes);
    }
}

} // namespace katzsched
