#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <vector>

#include "roadshare/common.hpp"
#include "roadshare/graph.hpp"
#include "roadshare/types.hpp"

namespace roadshare {

/// Set of query sources/destinations already served along a partial route.
/// Bit 2i: rider i has boarded (or finished); bit 2i+1: rider i was dropped
/// off. A mask is valid only if every set destination bit has its source
/// bit set; a rider cannot leave a vehicle never boarded.
struct ServedMask {
    std::uint64_t bits = 0;

    bool source_served(int i) const { return bits >> (2 * i) & 1; }
    bool dest_served(int i) const { return bits >> (2 * i + 1) & 1; }

    static bool valid(std::uint64_t bits, int q) {
        for (int i = 0; i < q; ++i) {
            bool s = bits >> (2 * i) & 1;
            bool d = bits >> (2 * i + 1) & 1;
            if (d && !s) return false;
        }
        return true;
    }

    bool operator==(const ServedMask&) const = default;
};

/// All 3^q valid masks, ordered by increasing popcount (ties by value), so
/// sweep-style relaxation passes see smaller sets first.
inline std::vector<ServedMask> enumerate_valid_masks(int q) {
    std::vector<ServedMask> out;
    std::uint64_t limit = 1ULL << (2 * q);
    for (std::uint64_t m = 0; m < limit; ++m) {
        if (ServedMask::valid(m, q)) out.push_back({m});
    }
    std::stable_sort(out.begin(), out.end(), [](const ServedMask& a, const ServedMask& b) {
        int pa = std::popcount(a.bits), pb = std::popcount(b.bits);
        if (pa != pb) return pa < pb;
        return a.bits < b.bits;
    });
    return out;
}

class StateBudgetError : public std::runtime_error {
  public:
    explicit StateBudgetError(std::uint64_t needed, std::uint64_t budget)
        : std::runtime_error("state budget exceeded: need " + std::to_string(needed) +
                             " states, budget " + std::to_string(budget)) {}
};

struct OptStopsOptions {
    bool early_stop = true;            ///< halt on extracting (en, full set)
    std::uint64_t state_budget = 1ULL << 23;
};

namespace exact_detail {

/// Trit view of a served set: digit i is 0 (untouched), 1 (boarded),
/// 2 (boarded and dropped). The dense mask index is the base-3 value, so
/// joining a source or a destination both add 3^i.
struct MaskSpace {
    int q;
    std::uint64_t count;          // 3^q
    std::vector<std::uint64_t> pow3;

    explicit MaskSpace(int q_) : q(q_) {
        pow3.resize(q + 1);
        pow3[0] = 1;
        for (int i = 1; i <= q; ++i) pow3[i] = pow3[i - 1] * 3;
        count = pow3[q];
    }

    int trit(std::uint64_t idx, int i) const { return static_cast<int>(idx / pow3[i] % 3); }
    std::uint64_t full() const { return count - 1; }

    std::uint64_t to_bits(std::uint64_t idx) const {
        std::uint64_t bits = 0;
        for (int i = 0; i < q; ++i) {
            int t = trit(idx, i);
            if (t >= 1) bits |= 1ULL << (2 * i);
            if (t == 2) bits |= 1ULL << (2 * i + 1);
        }
        return bits;
    }
};

/// A single boarding or drop-off: rider `query`, board when `is_source`.
struct JoinUnit {
    int query;
    bool is_source;
    double cost;  // already rider-weighted
};

/// Enumerates the exact batches of `size` join units that can extend mask
/// `idx` at node u, honoring source-before-destination inside the batch.
/// Emits (new mask index, batch cost, units in ascending query order).
template <typename F>
void for_each_batch(const MaskSpace& ms, std::uint64_t idx, NodeId u,
                    const QueryCostMaps& capped, double rider_w, int size, F&& emit) {
    std::vector<JoinUnit> batch;
    // Per query the batch may take: nothing, the source, the destination
    // (if boarded), or source+destination together.
    auto rec = [&](auto&& self, int i, std::uint64_t cur, double cost, int remaining) -> void {
        if (remaining == 0) {
            emit(cur, cost, batch);
            return;
        }
        if (i >= ms.q) return;
        if (2 * (ms.q - i) < remaining) return;  // not enough units left
        int t = ms.trit(idx, i);
        // skip query i
        self(self, i + 1, cur, cost, remaining);
        if (t == 0) {
            double cs = rider_w * capped.access[i][u];
            batch.push_back({i, true, cs});
            self(self, i + 1, cur + ms.pow3[i], cost + cs, remaining - 1);
            if (remaining >= 2) {
                double cd = rider_w * capped.egress[i][u];
                batch.push_back({i, false, cd});
                self(self, i + 1, cur + 2 * ms.pow3[i], cost + cs + cd, remaining - 2);
                batch.pop_back();
            }
            batch.pop_back();
        } else if (t == 1) {
            double cd = rider_w * capped.egress[i][u];
            batch.push_back({i, false, cd});
            self(self, i + 1, cur + ms.pow3[i], cost + cd, remaining - 1);
            batch.pop_back();
        }
    };
    rec(rec, 0, idx, 0.0, size);
}

}  // namespace exact_detail

/// Exact route-and-stops solver: Dijkstra over (node, served set) states,
/// extended with a stop counter when r4 is active and an open-stop flag
/// when r3 or r4 is active. Two relaxation families: grow the served set in
/// place (a rider walks to/from the current node), or move along an edge
/// with the set fixed. With a finite r2 budget, states keep Pareto label
/// sets over (objective, vehicle cost) instead of a single value, since a
/// cheaper label with a longer vehicle route can block budget-feasible
/// completions otherwise.
///
/// The overload taking QueryCostMaps lets callers substitute their own
/// rider cost tables; `maps` must hold the true (un-capped) values.
inline StopPlan opt_stops(const Graph& g, const QuerySet& qs, NodeId st, NodeId en,
                          const Constraints& cons, const QueryCostMaps& maps,
                          const OptStopsOptions& opts = {}) {
    const NodeId n = g.node_count();
    const int q = qs.q();
    cons.validate(q);
    if (q > 20) throw StateBudgetError(~0ULL, opts.state_budget);
    exact_detail::MaskSpace ms(q);

    const bool use_t = cons.r4_active(q);
    const bool use_open = use_t || cons.r3_active();
    const int tdim = use_t ? cons.r4 : 1;
    const int odim = use_open ? 2 : 1;

    const std::uint64_t total_states =
        static_cast<std::uint64_t>(n) * ms.count * tdim * odim;
    if (total_states > opts.state_budget) throw StateBudgetError(total_states, opts.state_budget);

    QueryCostMaps capped = maps;
    const double penalty = r1_penalty(g, q);
    apply_r1_cap(capped, cons, penalty);

    const double vehicle_w = cons.vehicle_weight();
    const double rider_w = cons.rider_weight();
    double r2_budget = kInf;
    if (cons.r2_active()) {
        r2_budget = cons.r2 * dijkstra(g, st).cost[en];
        r2_budget *= 1 + 1e-12;
    }

    auto state_id = [&](NodeId v, std::uint64_t mask, int t, int open) -> std::int64_t {
        std::int64_t s = v;
        s = s * static_cast<std::int64_t>(ms.count) + static_cast<std::int64_t>(mask);
        if (use_t) s = s * tdim + (t - 1);
        if (use_open) s = s * odim + open;
        return s;
    };

    struct Label {
        double d;
        double vcost;
        std::int64_t parent;  // label id
        NodeId node;
        std::uint32_t mask;
        std::int32_t t;
        std::int32_t open;
        bool dead;
    };
    std::vector<Label> labels;
    // Per state: single best label id in the plain case, Pareto set with r2.
    const bool pareto = cons.r2_active();
    std::vector<std::int64_t> best(pareto ? 0 : total_states, -1);
    std::vector<std::vector<std::int64_t>> front(pareto ? total_states : 0);

    struct PqEntry {
        double d;
        std::int64_t state;
        std::int64_t label;
        bool operator>(const PqEntry& o) const {
            if (d != o.d) return d > o.d;
            if (state != o.state) return state > o.state;
            return label > o.label;
        }
    };
    std::priority_queue<PqEntry, std::vector<PqEntry>, std::greater<PqEntry>> pq;

    SearchCounters counters;
    counters.peak_states = total_states;

    auto offer = [&](NodeId v, std::uint64_t mask, int t, int open, double d, double vcost,
                     std::int64_t parent) {
        std::int64_t s = state_id(v, mask, t, open);
        std::uint32_t m32 = static_cast<std::uint32_t>(mask);
        if (!pareto) {
            std::int64_t cur = best[s];
            if (cur >= 0 && labels[cur].d <= d) return;
            std::int64_t id = static_cast<std::int64_t>(labels.size());
            labels.push_back({d, vcost, parent, v, m32, t, open, false});
            if (cur >= 0) labels[cur].dead = true;
            best[s] = id;
            pq.push({d, s, id});
        } else {
            for (std::int64_t lid : front[s]) {
                const Label& l = labels[lid];
                if (!l.dead && l.d <= d && l.vcost <= vcost) return;  // dominated
            }
            std::int64_t id = static_cast<std::int64_t>(labels.size());
            labels.push_back({d, vcost, parent, v, m32, t, open, false});
            auto& fr = front[s];
            fr.erase(std::remove_if(fr.begin(), fr.end(),
                                    [&](std::int64_t lid) {
                                        Label& l = labels[lid];
                                        if (l.d >= d && l.vcost >= vcost) {
                                            l.dead = true;
                                            return true;
                                        }
                                        return false;
                                    }),
                     fr.end());
            fr.push_back(id);
            pq.push({d, s, id});
        }
    };

    offer(st, 0, 1, 1, 0.0, 0.0, -1);

    const std::uint64_t full = ms.full();
    std::int64_t answer_label = -1;

    while (!pq.empty()) {
        if (pq.size() > counters.peak_frontier) counters.peak_frontier = pq.size();
        PqEntry top = pq.top();
        pq.pop();
        {
            const Label& lab = labels[top.label];
            if (lab.dead) continue;
            if (!pareto && best[top.state] != top.label) continue;
        }
        ++counters.extractions;

        // Copy out before relaxing; offer() may reallocate the label arena.
        const NodeId u = labels[top.label].node;
        const std::uint64_t mask = labels[top.label].mask;
        const int t = labels[top.label].t;
        const int open = labels[top.label].open;
        const double d = labels[top.label].d;
        const double vcost = labels[top.label].vcost;

        if (u == en && mask == full) {
            if (answer_label < 0) answer_label = top.label;
            if (opts.early_stop) break;
            continue;
        }

        // Grow the served set in place.
        const bool batch_required =
            cons.r3_active() && use_open && open == 0 && u != en;
        if (batch_required) {
            exact_detail::for_each_batch(
                ms, mask, u, capped, rider_w, cons.r3,
                [&](std::uint64_t nmask, double jcost, const std::vector<exact_detail::JoinUnit>&) {
                    ++counters.relaxations;
                    offer(u, nmask, t, 1, d + jcost, vcost, top.label);
                });
        } else {
            for (int i = 0; i < q; ++i) {
                int tr = ms.trit(mask, i);
                if (tr == 2) continue;
                ++counters.relaxations;
                double jc = rider_w * (tr == 0 ? capped.access[i][u] : capped.egress[i][u]);
                offer(u, mask + ms.pow3[i], t, 1, d + jc, vcost, top.label);
            }
        }

        // Move along an edge, served set fixed.
        int t_next = use_t ? (open ? t + 1 : t) : 1;
        if (!use_t || t_next <= cons.r4) {
            for (const auto& e : g.out(u)) {
                ++counters.relaxations;
                double nv = vcost + e.cost;
                if (nv > r2_budget) continue;
                offer(e.to, mask, t_next, 0, d + vehicle_w * e.cost, nv, top.label);
            }
        }
    }

    StopPlan plan;
    plan.counters = counters;
    if (answer_label < 0) {
        plan.reason = std::isfinite(dijkstra(g, st).cost[en]) ? Infeasibility::kNoPlan
                                                              : Infeasibility::kDisconnected;
        return plan;
    }

    // Replay the label chain forward; a node enters P when it hosts a join
    // and is not already the latest stop. st and en are always included.
    std::vector<std::int64_t> chain;
    for (std::int64_t id = answer_label; id >= 0; id = labels[id].parent) chain.push_back(id);
    std::reverse(chain.begin(), chain.end());

    plan.stops.push_back(st);
    plan.board.assign(q, -1);
    plan.alight.assign(q, -1);
    for (std::size_t k = 1; k < chain.size(); ++k) {
        const Label& prev = labels[chain[k - 1]];
        const Label& cur = labels[chain[k]];
        if (cur.node != prev.node || cur.mask == prev.mask) continue;  // move
        if (plan.stops.back() != cur.node) plan.stops.push_back(cur.node);
        int stop_idx = static_cast<int>(plan.stops.size()) - 1;
        for (int i = 0; i < q; ++i) {
            int a = ms.trit(prev.mask, i), b = ms.trit(cur.mask, i);
            if (a == b) continue;
            if (a == 0) plan.board[i] = stop_idx;
            if (b == 2) plan.alight[i] = stop_idx;
        }
    }
    if (plan.stops.back() != en || plan.stops.size() < 2) plan.stops.push_back(en);

    // Cost decomposition and feasibility from the true tables.
    double riders = 0;
    bool r1_ok = true;
    for (int i = 0; i < q; ++i) {
        double a = maps.access[i][plan.stops[plan.board[i]]];
        double e = maps.egress[i][plan.stops[plan.alight[i]]];
        plan.solo_costs.emplace_back(a, e);
        riders += a + e;
        if (cons.r1_active() &&
            (a > cons.r1 * (1 + 1e-12) + 1e-12 || e > cons.r1 * (1 + 1e-12) + 1e-12))
            r1_ok = false;
    }
    plan.vehicle_cost = 0;
    for (std::size_t i = 0; i + 1 < plan.stops.size(); ++i) {
        if (plan.stops[i] == plan.stops[i + 1]) continue;
        plan.vehicle_cost += dijkstra(g, plan.stops[i]).cost[plan.stops[i + 1]];
    }
    plan.total_cost = objective_value(cons, plan.vehicle_cost, riders);
    plan.feasible = r1_ok;
    if (!r1_ok) plan.reason = Infeasibility::kSoloLegOverR1;
    return plan;
}

inline StopPlan opt_stops(const Graph& g, const QuerySet& qs, NodeId st, NodeId en,
                          const Constraints& cons = {}, const OptStopsOptions& opts = {}) {
    return opt_stops(g, qs, st, en, cons, compute_query_cost_maps(g, qs), opts);
}

}  // namespace roadshare
