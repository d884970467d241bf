#pragma once

#include <iosfwd>
#include <string>

#include "katzsched/coverage.hpp"
#include "katzsched/horizon.hpp"
#include "katzsched/mutation_stats.hpp"

namespace katzsched {

// Coverage trace file: `S <seed_id> <node_id>...` lines; repeated seed
// ids merge. `#` comments and blank lines are ignored.
TraceMap parse_traces(std::istream &in, const std::string &filename = "<input>");
TraceMap parse_traces_file(const std::string &path);
std::string serialize_traces(const TraceMap &traces);

// Stats file: one `T <total>` line then `R <node_id> <count>` lines.
MutationStats parse_stats(std::istream &in, const std::string &filename = "<input>");
MutationStats parse_stats_file(const std::string &path);
std::string serialize_stats(const MutationStats &stats);

// Horizon graph dump: N/E lines as in the cfg format plus `H <id>` per
// horizon node and `SEED <seed_id> <node_id>` mappings.
std::string dump_edge_horizon_graph(const EdgeHorizonGraph &ehg);

// 12 significant digits, shortest form.
std::string format_score(double value);

} // namespace katzsched
