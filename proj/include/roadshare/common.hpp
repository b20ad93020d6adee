#pragma once

#include <cstdint>
#include <limits>
#include <string>

namespace roadshare {

/// Dense node index into a Graph's node table.
using NodeId = std::int32_t;

constexpr NodeId kNoNode = -1;

/// Unreachable / unset cost sentinel. IEEE infinity compares strictly
/// greater than any finite penalty value, which is all the search code
/// relies on.
constexpr double kInf = std::numeric_limits<double>::infinity();

/// Deterministic work counters emitted alongside every solver result.
/// These stand in for memory/time measurements in tests: they are exact
/// and reproducible where wall time is not.
struct SearchCounters {
    std::uint64_t extractions = 0;      ///< priority-queue pops
    std::uint64_t relaxations = 0;      ///< edge / state relaxation attempts
    std::uint64_t peak_frontier = 0;    ///< max queue size observed
    std::uint64_t peak_states = 0;      ///< product-state table size (exact solver)
    std::uint64_t max_edge_relax = 0;   ///< max relaxations over any single edge
    std::uint64_t repairs = 0;          ///< stop-repair events (constrained heuristics)

    void merge(const SearchCounters& o) {
        extractions += o.extractions;
        relaxations += o.relaxations;
        if (o.peak_frontier > peak_frontier) peak_frontier = o.peak_frontier;
        if (o.peak_states > peak_states) peak_states = o.peak_states;
        if (o.max_edge_relax > max_edge_relax) max_edge_relax = o.max_edge_relax;
        repairs += o.repairs;
    }
};

}  // namespace roadshare
