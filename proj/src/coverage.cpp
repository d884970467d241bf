#include "katzsched/coverage.hpp"

namespace katzsched {

CoverageCorpus CoverageCorpus::empty_for(const Cfg &cfg) {
    CoverageCorpus corpus;
    corpus.unvisited.insert(cfg.nodes().begin(), cfg.nodes().end());
    return corpus;
}

void CoverageCorpus::add_trace(const Cfg &cfg, SeedId seed, const Trace &nodes) {
    for (NodeId n : nodes) {
        if (!cfg.contains(n)) throw UnknownNodeError(n);
    }
    Trace &trace = traces[seed];
    for (NodeId n : nodes) {
        trace.insert(n);
        if (visited.insert(n).second) unvisited.erase(n);
    }
}

CoverageCorpus classify_nodes(const Cfg &cfg, const TraceMap &traces) {
    CoverageCorpus corpus = CoverageCorpus::empty_for(cfg);
    for (const auto &[seed, trace] : traces) {
        corpus.add_trace(cfg, seed, trace);
    }
    return corpus;
}

} // namespace katzsched
