#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "katzsched/centrality.hpp"
#include "katzsched/horizon.hpp"
#include "katzsched/rank_agreement.hpp"
#include "katzsched/scheduler.hpp"
#include "katzsched/simulator.hpp"
#include "katzsched/text_io.hpp"

namespace {

using namespace katzsched;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNotConverged = 2;

void write_output(const std::string &path, const std::string &content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open file: " + path);
    out << content;
}

// Scores as TSV, descending score with ascending-id ties.
std::string scores_tsv(const std::map<NodeId, double> &scores) {
    std::vector<std::pair<NodeId, double>> rows(scores.begin(), scores.end());
    std::stable_sort(rows.begin(), rows.end(), [](const auto &a, const auto &b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::ostringstream out;
    for (const auto &[id, score] : rows) {
        out << id << "\t" << format_score(score) << "\n";
    }
    return out.str();
}

struct CommonOpts {
    std::string out_path;
    bool strict = false;
};

struct GenerateSpec {
    ProgramGenParams params;
    bool set = false;
};

GenerateSpec parse_generate_spec(const std::string &text) {
    GenerateSpec spec;
    spec.set = true;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw CLI::ValidationError("--generate", "expected k=v, got '" + item + "'");
        }
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        try {
            if (key == "n") spec.params.n_nodes = std::stoull(value);
            else if (key == "branching") spec.params.branching = static_cast<unsigned>(std::stoul(value));
            else if (key == "depth_bias") spec.params.depth_bias = std::stod(value);
            else if (key == "seed") spec.params.rng_seed = std::stoull(value);
            else if (key == "edges") spec.params.target_edges = std::stoull(value);
            else if (key == "rare") spec.params.rare_region_nodes = std::stoull(value);
            else if (key == "rare_gate") spec.params.rare_gate_prob = std::stod(value);
            else throw CLI::ValidationError("--generate", "unknown key '" + key + "'");
        } catch (const std::invalid_argument &) {
            throw CLI::ValidationError("--generate", "bad value for '" + key + "'");
        }
    }
    return spec;
}

int run_graph(const std::string &cfg_path, const std::string &traces_path,
              const CommonOpts &opts) {
    const Cfg cfg = Cfg::parse_file(cfg_path);
    const TraceMap traces = parse_traces_file(traces_path);
    const EdgeHorizonGraph ehg = build_edge_horizon_graph(cfg, traces);
    write_output(opts.out_path, dump_edge_horizon_graph(ehg));
    return kExitOk;
}

int run_centrality(const std::string &graph_path, const std::string &kind_name,
                   const KatzParams &params, bool sweep, const CommonOpts &opts) {
    const Cfg cfg = Cfg::parse_file(graph_path);
    Digraph graph;
    for (NodeId id : cfg.nodes()) graph.add_node(id);
    for (const CfgEdge &e : cfg.edges()) graph.add_edge(e.src, e.dst, e.kind);

    bool converged = true;
    std::ostringstream out;
    if (sweep) {
        for (double alpha : {0.25, 0.5, 0.75, 1.0}) {
            KatzParams sweep_params = params;
            sweep_params.alpha = alpha;
            const CentralityVector cv = katz_power(graph, sweep_params);
            converged = converged && cv.converged;
            out << "# alpha=" << format_score(alpha) << "\n" << scores_tsv(cv.scores);
        }
    } else if (kind_name == "katz") {
        const CentralityVector cv = katz_power(graph, params);
        converged = cv.converged;
        out << scores_tsv(cv.scores);
    } else {
        auto kind = centrality_kind_from(kind_name);
        if (!kind) throw CLI::ValidationError("--kind", "unknown kind '" + kind_name + "'");
        const CentralityVector cv = alt_centrality(graph, *kind, params);
        converged = cv.converged;
        out << scores_tsv(cv.scores);
    }
    write_output(opts.out_path, out.str());
    if (!converged && opts.strict) return kExitNotConverged;
    return kExitOk;
}

int run_rank(const std::string &cfg_path, const std::string &traces_path,
             const std::string &stats_path, const KatzParams &params,
             ScheduleMode mode, const CommonOpts &opts) {
    const Cfg cfg = Cfg::parse_file(cfg_path);
    const TraceMap traces = parse_traces_file(traces_path);
    const MutationStats stats =
        stats_path.empty() ? MutationStats{} : parse_stats_file(stats_path);

    const CoverageCorpus corpus = classify_nodes(cfg, traces);
    const EdgeHorizonGraph ehg = build_edge_horizon_graph(cfg, corpus);
    const BetaVector beta = compute_beta(horizon_nodes(cfg, corpus), stats);
    const CentralityVector cv = katz_power(ehg.graph, params, beta);
    const SeedRanking ranking = rank_seeds(ehg, cv, mode);

    std::ostringstream out;
    for (const RankedSeed &entry : ranking.entries) {
        out << entry.seed << "\t" << format_score(entry.score) << "\t"
            << format_score(entry.energy) << "\n";
    }
    write_output(opts.out_path, out.str());
    if (!cv.converged && opts.strict) return kExitNotConverged;
    return kExitOk;
}

int run_simulate(const std::string &program_path, const GenerateSpec &generate,
                 const std::string &save_program, const std::string &strategy_name,
                 std::uint64_t rounds, std::uint64_t budget, std::uint64_t rng_seed,
                 const CampaignConfig &config, const CommonOpts &opts) {
    SyntheticProgram program;
    if (!program_path.empty()) {
        program = load_program_file(program_path);
    } else if (generate.set) {
        program = generate_program(generate.params);
    } else {
        throw CLI::ValidationError("simulate", "need --program or --generate");
    }
    if (!save_program.empty()) {
        std::ofstream out(save_program, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open file: " + save_program);
        out << serialize_program(program);
    }
    auto strategy = strategy_from(strategy_name);
    if (!strategy) {
        throw CLI::ValidationError("--strategy", "unknown strategy '" + strategy_name + "'");
    }
    const CampaignResult result =
        simulate_campaign(program, *strategy, rounds, budget, rng_seed, config);
    std::ostringstream out;
    for (const auto &[round, covered] : result.coverage_timeline) {
        out << round << "\t" << covered << "\n";
    }
    write_output(opts.out_path, out.str());
    return kExitOk;
}

int run_oracle(const std::string &cfg_path, const std::string &traces_path,
               const std::string &stats_path, const KatzParams &params,
               const CommonOpts &opts) {
    const Cfg cfg = Cfg::parse_file(cfg_path);
    const TraceMap traces = parse_traces_file(traces_path);
    const MutationStats stats =
        stats_path.empty() ? MutationStats{} : parse_stats_file(stats_path);

    const CoverageCorpus corpus = classify_nodes(cfg, traces);
    const EdgeHorizonGraph ehg = build_edge_horizon_graph(cfg, corpus);
    const BetaVector beta = compute_beta(horizon_nodes(cfg, corpus), stats);
    const CentralityVector cv = katz_power(ehg.graph, params, beta);
    const SeedRanking ranking = rank_seeds(ehg, cv, ScheduleMode::EnergyQueue);

    const EdgeSet feasible = all_edges(ehg);
    std::map<std::uint64_t, double> scores;
    std::map<std::uint64_t, double> counts;
    std::ostringstream out;
    for (const RankedSeed &entry : ranking.entries) {
        const std::size_t count = reachable_edge_oracle(ehg, entry.seed, feasible);
        scores[entry.seed] = entry.score;
        counts[entry.seed] = static_cast<double>(count);
        out << entry.seed << "\t" << format_score(entry.score) << "\t" << count << "\n";
    }
    const RankAgreement agreement = kendall_tau(scores, counts);
    out << "# tau=" << format_score(agreement.tau)
        << " p=" << format_score(agreement.p_value) << "\n";
    write_output(opts.out_path, out.str());
    if (!cv.converged && opts.strict) return kExitNotConverged;
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Seed scheduling by Katz centrality over edge horizon graphs"};
    app.set_version_flag("--version", "0.1.0");
    app.require_subcommand(1);

    CommonOpts opts;
    KatzParams params;
    std::string cfg_path, traces_path, stats_path, graph_path, program_path;
    std::string save_program, mode_name = "prob", kind_name = "katz";
    std::string strategy_name = "katz", generate_text;
    bool sweep = false;
    std::uint64_t rounds = 500, budget = 100, rng_seed = 0;
    CampaignConfig config;

    auto add_common = [&](CLI::App *cmd) {
        cmd->add_option("--out", opts.out_path, "Output file (default: stdout)")
            ->capture_default_str();
        cmd->add_flag("--strict", opts.strict,
                      "Exit with status 2 when iteration does not converge")
            ->capture_default_str();
    };
    auto add_katz = [&](CLI::App *cmd) {
        cmd->add_option("--alpha", params.alpha, "Katz decay factor")
            ->capture_default_str();
        cmd->add_option("--tolerance", params.tolerance,
                        "L-inf convergence tolerance")
            ->capture_default_str();
        cmd->add_option("--max-iterations", params.max_iterations,
                        "Power iteration cap")
            ->capture_default_str();
    };

    CLI::App *graph_cmd =
        app.add_subcommand("graph", "Build and dump the edge horizon graph");
    graph_cmd->add_option("--cfg", cfg_path, "Control-flow graph file")->required();
    graph_cmd->add_option("--traces", traces_path, "Coverage trace file")->required();
    add_common(graph_cmd);

    CLI::App *centrality_cmd =
        app.add_subcommand("centrality", "Score nodes of a raw graph");
    centrality_cmd->add_option("--graph", graph_path, "Graph file (cfg format)")
        ->required();
    centrality_cmd
        ->add_option("--kind", kind_name, "katz, pagerank, eigenvector or degree")
        ->capture_default_str();
    centrality_cmd
        ->add_flag("--alpha-sweep", sweep, "Emit Katz scores for alpha in {0.25, 0.5, 0.75, 1.0}")
        ->capture_default_str();
    add_katz(centrality_cmd);
    add_common(centrality_cmd);

    CLI::App *rank_cmd = app.add_subcommand("rank", "Rank corpus seeds by centrality");
    rank_cmd->add_option("--cfg", cfg_path, "Control-flow graph file")->required();
    rank_cmd->add_option("--traces", traces_path, "Coverage trace file")->required();
    rank_cmd->add_option("--stats", stats_path, "Mutation stats file (default: none)")
        ->capture_default_str();
    rank_cmd->add_option("--mode", mode_name, "prob or queue")->capture_default_str();
    add_katz(rank_cmd);
    add_common(rank_cmd);

    CLI::App *simulate_cmd =
        app.add_subcommand("simulate", "Run a synthetic fuzzing campaign");
    simulate_cmd->add_option("--program", program_path, "Synthetic program file")
        ->capture_default_str();
    simulate_cmd
        ->add_option("--generate", generate_text,
                     "Generate a program: n=..,branching=..,depth_bias=..,seed=..,"
                     "edges=..,rare=..,rare_gate=..")
        ->capture_default_str();
    simulate_cmd
        ->add_option("--save-program", save_program, "Write the program to a file")
        ->capture_default_str();
    simulate_cmd
        ->add_option("--strategy", strategy_name,
                     "katz, pagerank, eigenvector, degree, random or round_robin")
        ->capture_default_str();
    simulate_cmd->add_option("--rounds", rounds, "Scheduling rounds")
        ->capture_default_str();
    simulate_cmd->add_option("--budget", budget, "Base mutation budget per round")
        ->capture_default_str();
    simulate_cmd->add_option("--rng-seed", rng_seed, "Campaign RNG seed")
        ->capture_default_str();
    simulate_cmd->add_option("--alpha", config.alpha, "Katz decay factor")
        ->capture_default_str();
    simulate_cmd->add_option("--mode", mode_name, "prob or queue")
        ->capture_default_str();
    simulate_cmd
        ->add_option("--rebuild-interval", config.rebuild_interval,
                     "Rounds between forced ranking rebuilds")
        ->capture_default_str();
    simulate_cmd
        ->add_option("--max-energy-factor", config.max_energy_factor,
                     "Queue-mode budget cap as a multiple of the base budget")
        ->capture_default_str();
    add_common(simulate_cmd);

    CLI::App *oracle_cmd = app.add_subcommand(
        "oracle", "Compare seed centrality with reachable-feasible-edge counts");
    oracle_cmd->add_option("--cfg", cfg_path, "Control-flow graph file")->required();
    oracle_cmd->add_option("--traces", traces_path, "Coverage trace file")->required();
    oracle_cmd->add_option("--stats", stats_path, "Mutation stats file (default: none)")
        ->capture_default_str();
    add_katz(oracle_cmd);
    add_common(oracle_cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        if (graph_cmd->parsed()) return run_graph(cfg_path, traces_path, opts);
        if (centrality_cmd->parsed()) {
            return run_centrality(graph_path, kind_name, params, sweep, opts);
        }
        if (rank_cmd->parsed()) {
            auto mode = schedule_mode_from(mode_name);
            if (!mode) {
                std::cerr << "error: unknown mode '" << mode_name << "'\n";
                return kExitInputError;
            }
            return run_rank(cfg_path, traces_path, stats_path, params, *mode, opts);
        }
        if (simulate_cmd->parsed()) {
            auto mode = schedule_mode_from(mode_name);
            if (!mode) {
                std::cerr << "error: unknown mode '" << mode_name << "'\n";
                return kExitInputError;
            }
            config.mode = *mode;
            GenerateSpec generate;
            if (!generate_text.empty()) generate = parse_generate_spec(generate_text);
            return run_simulate(program_path, generate, save_program, strategy_name,
                                rounds, budget, rng_seed, config, opts);
        }
        if (oracle_cmd->parsed()) {
            return run_oracle(cfg_path, traces_path, stats_path, params, opts);
        }
    } catch (const CLI::ValidationError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
