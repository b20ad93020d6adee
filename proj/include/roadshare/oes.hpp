#pragma once

#include <vector>

#include "roadshare/common.hpp"
#include "roadshare/graph.hpp"
#include "roadshare/indexed_heap.hpp"
#include "roadshare/sssp.hpp"
#include "roadshare/types.hpp"

namespace roadshare {

/// State of one simultaneous multi-query search. Per node it tracks the
/// frontier key d(v), the vehicle-segment parent, and the costs of the
/// queries that have reached the node so far (the T ledger). The search is
/// label-correcting: nodes re-enter the frontier whenever any query cost
/// or the key changes, and individual query costs converge to the exact
/// shortest-path values at exhaustion.
class GroupSearch {
  public:
    GroupSearch(const Graph& g, const std::vector<NodeId>& sources)
        : g_(&g),
          q_(static_cast<int>(sources.size())),
          key_(g.node_count(), kInf),
          parent_(g.node_count(), kNoNode),
          tcost_(static_cast<std::size_t>(g.node_count()) * q_, kInf),
          tcount_(g.node_count(), 0),
          edge_relax_(g.edge_count(), 0),
          pq_(g.node_count()) {
        for (int i = 0; i < q_; ++i) {
            NodeId s = sources[i];
            key_[s] = 0;
            if (tcost_[idx(s, i)] == kInf) {
                tcost_[idx(s, i)] = 0;
                ++tcount_[s];
            }
            if (!pq_.contains(s)) pq_.insert(s, 0);
        }
    }

    int q() const { return q_; }
    double key(NodeId v) const { return key_[v]; }
    NodeId parent(NodeId v) const { return parent_[v]; }
    int reach_count(NodeId v) const { return tcount_[v]; }
    bool complete(NodeId v) const { return tcount_[v] == q_; }
    double query_cost(NodeId v, int i) const { return tcost_[idx(v, i)]; }
    const SearchCounters& counters() const { return counters_; }
    bool exhausted() const { return pq_.empty(); }

    /// Offers every query reaching u into v's ledger via the edge (u,v,c),
    /// then recomputes v's key as the best of:
    ///   1. the sum of v's query costs (riders still walking; parent NIL),
    ///   2. d(u) + c when all queries wait at u (vehicle hop; parent u),
    ///   3. the previous key (no change).
    /// A newly reaching query forces the key to the ledger sum even when
    /// that raises it; the key must reflect the current reaching set.
    /// Returns true when any query cost or the key changed.
    bool merge_relax(NodeId u, NodeId v, double c) {
        bool upd = false;
        const int q_prev = tcount_[v];
        for (int i = 0; i < q_; ++i) {
            double lu = tcost_[idx(u, i)];
            if (lu == kInf) continue;
            double& lv = tcost_[idx(v, i)];
            if (lv == kInf) {
                lv = lu + c;
                ++tcount_[v];
                upd = true;
            } else if (lu + c < lv) {
                lv = lu + c;
                upd = true;
            }
        }
        if (upd) {
            double sum = 0;
            for (int i = 0; i < q_; ++i) {
                double lv = tcost_[idx(v, i)];
                if (lv != kInf) sum += lv;
            }
            if (tcount_[v] > q_prev || sum < key_[v]) {
                key_[v] = sum;
                parent_[v] = kNoNode;
            }
        }
        if (tcount_[u] == q_ && key_[u] + c < key_[v]) {
            upd = true;
            key_[v] = key_[u] + c;
            parent_[v] = u;
        }
        return upd;
    }

    /// One extraction plus the relaxations out of it. Returns the extracted
    /// node, or kNoNode if the frontier is empty.
    NodeId step() {
        if (pq_.empty()) return kNoNode;
        if (pq_.size() > counters_.peak_frontier) counters_.peak_frontier = pq_.size();
        auto [u64, du] = pq_.extract_min();
        NodeId u = static_cast<NodeId>(u64);
        ++counters_.extractions;
        const auto row = g_->out(u);
        const std::uint32_t base = g_->offsets[u];
        for (std::size_t k = 0; k < row.size(); ++k) {
            ++counters_.relaxations;
            std::uint32_t cnt = ++edge_relax_[base + k];
            if (cnt > counters_.max_edge_relax) counters_.max_edge_relax = cnt;
            NodeId v = row[k].to;
            if (merge_relax(u, v, row[k].cost)) {
                pq_.push_or_update(v, key_[v]);
            }
        }
        return u;
    }

    void run_to_exhaustion() {
        while (step() != kNoNode) {}
    }

  private:
    std::size_t idx(NodeId v, int i) const {
        return static_cast<std::size_t>(v) * q_ + i;
    }

    const Graph* g_;
    int q_;
    std::vector<double> key_;
    std::vector<NodeId> parent_;
    std::vector<double> tcost_;
    std::vector<int> tcount_;
    std::vector<std::uint32_t> edge_relax_;
    IndexedHeap pq_;
    SearchCounters counters_;
};

namespace detail {

/// Follows a parent chain to its NIL end; a hop budget guards against
/// degenerate zero-cost cycles in the chain.
inline NodeId walk_to_root(const GroupSearch& s, NodeId start, NodeId n) {
    NodeId v = start;
    NodeId hops = 0;
    while (s.parent(v) != kNoNode && hops++ <= n) {
        v = s.parent(v);
    }
    return v;
}

/// Recomputed C1 decomposition for a fixed (st, en) pair: one Dijkstra on
/// the transpose for all access legs, one forward for the vehicle leg and
/// all egress legs.
inline EndStopsResult assemble_end_stops(const Graph& g, const QuerySet& qs, NodeId st,
                                         NodeId en) {
    EndStopsResult r;
    r.st = st;
    r.en = en;
    Graph gt = transpose(g);
    CostMap to_st = dijkstra(gt, st);
    CostMap from_st = dijkstra(g, st);
    CostMap from_en = dijkstra(g, en);
    r.vehicle_cost = from_st.cost[en];
    double total = r.vehicle_cost;
    for (auto& [s, d] : qs.pairs) {
        r.access_costs.push_back(to_st.cost[s]);
        r.egress_costs.push_back(from_en.cost[d]);
        total += to_st.cost[s] + from_en.cost[d];
    }
    r.total_cost = total;
    r.feasible = std::isfinite(total);
    return r;
}

}  // namespace detail

/// Brute-force end-stop query: q Dijkstras for the rider legs, then one
/// Dijkstra per candidate start node over all n^2 (st,en) pairs. Ties break
/// toward the smaller st id, then the smaller en id.
inline EndStopsResult baseline_end_stops(const Graph& g, const QuerySet& qs) {
    const NodeId n = g.node_count();
    SearchCounters counters;
    Graph gt = transpose(g);

    std::vector<double> access_sum(n, 0), egress_sum(n, 0);
    std::vector<CostMap> from_sources, to_dests;
    for (auto& [s, d] : qs.pairs) {
        from_sources.push_back(dijkstra(g, s, &counters));
        to_dests.push_back(dijkstra(gt, d, &counters));
    }
    for (NodeId v = 0; v < n; ++v) {
        for (int i = 0; i < qs.q(); ++i) {
            access_sum[v] += from_sources[i].cost[v];
            egress_sum[v] += to_dests[i].cost[v];
        }
    }

    double best = kInf;
    NodeId best_st = kNoNode, best_en = kNoNode;
    for (NodeId u = 0; u < n; ++u) {
        if (access_sum[u] == kInf) continue;
        CostMap from_u = dijkstra(g, u, &counters);
        for (NodeId v = 0; v < n; ++v) {
            double c = from_u.cost[v] + access_sum[u] + egress_sum[v];
            if (c < best) {
                best = c;
                best_st = u;
                best_en = v;
            }
        }
    }

    if (best_st == kNoNode) {
        EndStopsResult r;
        r.counters = counters;
        return r;
    }
    EndStopsResult r;
    r.st = best_st;
    r.en = best_en;
    r.feasible = true;
    r.vehicle_cost = dijkstra(g, best_st).cost[best_en];
    for (int i = 0; i < qs.q(); ++i) {
        r.access_costs.push_back(from_sources[i].cost[best_st]);
        r.egress_costs.push_back(to_dests[i].cost[best_en]);
    }
    r.total_cost = best;
    r.counters = counters;
    return r;
}

struct FastEndStopsOptions {
    bool prune = false;
};

/// End-stop query via two simultaneous group searches: forward from the
/// sources on g, backward from the destinations on the transpose. The
/// answer midpoint minimizes d_s(v) + d_d(v) over nodes reached by all
/// queries in both searches; the end stops fall out of the parent chains.
///
/// With pruning on, the two searches run interleaved and share a candidate
/// bound: each search stops once its extracted key reaches the bound, and
/// the candidate scan happens at extraction time instead of afterwards.
inline EndStopsResult fast_end_stops(const Graph& g, const QuerySet& qs,
                                     const FastEndStopsOptions& opts = {}) {
    const NodeId n = g.node_count();
    Graph gt = transpose(g);
    GroupSearch fwd(g, qs.sources());
    GroupSearch bwd(gt, qs.dests());

    double opt = kInf;
    NodeId mid = kNoNode;

    auto consider = [&](NodeId v) {
        if (fwd.complete(v) && bwd.complete(v)) {
            double c = fwd.key(v) + bwd.key(v);
            if (c < opt || (c == opt && v < mid)) {
                opt = c;
                mid = v;
            }
        }
    };

    if (!opts.prune) {
        fwd.run_to_exhaustion();
        bwd.run_to_exhaustion();
        for (NodeId v = 0; v < n; ++v) consider(v);
    } else {
        bool fwd_live = true, bwd_live = true;
        while (fwd_live || bwd_live) {
            if (fwd_live) {
                NodeId u = fwd.step();
                if (u == kNoNode) {
                    fwd_live = false;
                } else {
                    consider(u);
                    if (fwd.key(u) >= opt) fwd_live = false;
                }
            }
            if (bwd_live) {
                NodeId u = bwd.step();
                if (u == kNoNode) {
                    bwd_live = false;
                } else {
                    consider(u);
                    if (bwd.key(u) >= opt) bwd_live = false;
                }
            }
        }
    }

    EndStopsResult r;
    r.counters = fwd.counters();
    r.counters.merge(bwd.counters());
    if (mid == kNoNode) return r;

    NodeId st = detail::walk_to_root(fwd, mid, n);
    NodeId en = detail::walk_to_root(bwd, mid, n);
    SearchCounters keep = r.counters;
    r = detail::assemble_end_stops(g, qs, st, en);
    r.counters = keep;
    return r;
}

}  // namespace roadshare
