#pragma once

#include <vector>

#include "roadshare/common.hpp"
#include "roadshare/graph.hpp"
#include "roadshare/indexed_heap.hpp"

namespace roadshare {

/// Single-source shortest-path costs with parent pointers. Unreachable
/// nodes carry kInf and kNoNode.
struct CostMap {
    NodeId source = kNoNode;
    std::vector<double> cost;
    std::vector<NodeId> parent;

    double operator[](NodeId v) const { return cost[v]; }
};

/// Dijkstra over the graph's nonnegative edge costs, with an addressable
/// binary heap. Queue ties break toward the smaller node id so traces are
/// deterministic.
inline CostMap dijkstra(const Graph& g, NodeId source, SearchCounters* counters = nullptr) {
    const NodeId n = g.node_count();
    CostMap cm;
    cm.source = source;
    cm.cost.assign(n, kInf);
    cm.parent.assign(n, kNoNode);
    cm.cost[source] = 0;

    IndexedHeap pq(n);
    pq.insert(source, 0);
    while (!pq.empty()) {
        if (counters && pq.size() > counters->peak_frontier) counters->peak_frontier = pq.size();
        auto [u, du] = pq.extract_min();
        if (counters) ++counters->extractions;
        for (const auto& e : g.out(static_cast<NodeId>(u))) {
            if (counters) ++counters->relaxations;
            double nd = du + e.cost;
            if (nd < cm.cost[e.to]) {
                cm.cost[e.to] = nd;
                cm.parent[e.to] = static_cast<NodeId>(u);
                pq.push_or_update(e.to, nd);
            }
        }
    }
    return cm;
}

/// Costs *to* each target: result[i].cost[v] = SPC(v, targets[i]) in g.
/// Implemented as one Dijkstra per target on the transposed graph.
inline std::vector<CostMap> spc_to_targets(const Graph& g, const std::vector<NodeId>& targets,
                                           SearchCounters* counters = nullptr) {
    Graph gt = transpose(g);
    std::vector<CostMap> out;
    out.reserve(targets.size());
    for (NodeId t : targets) out.push_back(dijkstra(gt, t, counters));
    return out;
}

}  // namespace roadshare
