#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "roadshare/common.hpp"
#include "roadshare/graph.hpp"
#include "roadshare/indexed_heap.hpp"
#include "roadshare/types.hpp"

namespace roadshare {

enum class HeurVersion {
    kNoRevisit,    ///< never relax into an extracted node (presented version)
    kAllowRevisit  ///< label-correcting; nodes may re-enter the frontier
};

struct HeurStopsOptions {
    HeurVersion version = HeurVersion::kNoRevisit;
    bool prune = false;  ///< stop once an extracted node's route cost exceeds d(en)
};

/// Greedy single-label route search. Each node keeps one candidate "route
/// ending here": the vehicle's walk cost, a parent pointer, and per rider a
/// (boarded-by-now, alight-by-now) solo cost pair. Relaxing an edge (u,v)
/// offers each rider three choices: keep u's pair, keep the boarding but
/// alight at v, or board and alight at v. The greedy commit keeps whichever
/// full candidate beats v's current key; losing candidates are forgotten,
/// which is where the sub-optimality comes from.
///
/// With r3/r4 active the per-node state also carries the explicit stop
/// sequence and assignments so the stop-repair rules can run; see
/// relax_route_state below.
class HeurSearch {
  public:
    HeurSearch(const Graph& g, const QuerySet& qs, NodeId st, NodeId en,
               const Constraints& cons, const QueryCostMaps& true_maps)
        : g_(&g),
          en_(en),
          cons_(cons),
          q_(qs.q()),
          maps_(true_maps),
          key_(g.node_count(), kInf),
          veh_(g.node_count(), kInf),
          parent_(g.node_count(), kNoNode),
          ledger_(static_cast<std::size_t>(g.node_count()) * q_ * 2, kInf),
          mark_(g.node_count(), false),
          extract_count_(g.node_count(), 0),
          edge_relax_(g.edge_count(), 0),
          pq_(g.node_count()) {
        cons_.validate(q_);
        penalty_ = r1_penalty(g, q_);
        apply_r1_cap(maps_, cons_, penalty_);
        if (cons_.r2_active()) {
            r2_budget_ = cons_.r2 * dijkstra(g, st).cost[en] * (1 + 1e-12);
        }
        track_routes_ = cons_.r3_active() || cons_.r4_active(q_);
        if (track_routes_) routes_.resize(g.node_count());

        // Everyone boards and alights at the start stop.
        veh_[st] = 0;
        double riders = 0;
        for (int i = 0; i < q_; ++i) {
            acc(st, i) = maps_.access[i][st];
            egr(st, i) = maps_.egress[i][st];
            riders += acc(st, i) + egr(st, i);
        }
        key_[st] = objective_value(cons_, 0.0, riders);
        if (track_routes_) {
            routes_[st].stop_nodes = {st};
            routes_[st].board_pos.assign(q_, 0);
            routes_[st].alight_pos.assign(q_, 0);
        }
        pq_.insert(st, key_[st]);
    }

    double key(NodeId v) const { return key_[v]; }
    double vehicle_cost(NodeId v) const { return veh_[v]; }
    NodeId parent(NodeId v) const { return parent_[v]; }
    double access_cost(NodeId v, int i) const { return ledger_[idx(v, i)]; }
    double egress_cost(NodeId v, int i) const { return ledger_[idx(v, i) + 1]; }
    const SearchCounters& counters() const { return counters_; }
    const QueryCostMaps& capped_maps() const { return maps_; }

    void run(const HeurStopsOptions& opts) {
        const bool revisit = opts.version == HeurVersion::kAllowRevisit;
        const NodeId n = g_->node_count();
        while (!pq_.empty()) {
            if (pq_.size() > counters_.peak_frontier) counters_.peak_frontier = pq_.size();
            auto [u64, du] = pq_.extract_min();
            NodeId u = static_cast<NodeId>(u64);
            ++counters_.extractions;
            mark_[u] = true;
            if (++extract_count_[u] > n)
                throw std::runtime_error("revisit cap exceeded at node " + std::to_string(u));
            if (opts.prune && veh_[u] > key_[en_]) break;
            const auto row = g_->out(u);
            const std::uint32_t base = g_->offsets[u];
            for (std::size_t k = 0; k < row.size(); ++k) {
                NodeId v = row[k].to;
                if (!revisit && mark_[v]) continue;
                ++counters_.relaxations;
                std::uint32_t cnt = ++edge_relax_[base + k];
                if (cnt > counters_.max_edge_relax) counters_.max_edge_relax = cnt;
                if (track_routes_ ? relax_route_state(u, v, row[k].cost)
                                  : relax_vehicle(u, v, row[k].cost)) {
                    pq_.push_or_update(v, key_[v]);
                }
            }
        }
    }

    /// Plain relaxation: per-rider three-way choice, commit on strict
    /// improvement of the full candidate.
    bool relax_vehicle(NodeId u, NodeId v, double c) {
        double nveh = veh_[u] + c;
        if (nveh > r2_budget_) return false;
        double riders = 0;
        for (int i = 0; i < q_; ++i) {
            double cs = acc(u, i), cd = egr(u, i);
            double keep = cs + std::min(cd, maps_.egress[i][v]);
            double fresh = maps_.access[i][v] + maps_.egress[i][v];
            riders += std::min(keep, fresh);
        }
        double cand = objective_value(cons_, nveh, riders);
        if (!(cand < key_[v])) return false;
        key_[v] = cand;
        parent_[v] = u;
        veh_[v] = nveh;
        for (int i = 0; i < q_; ++i) {
            double cs = acc(u, i), cd = egr(u, i);
            double keep = cs + std::min(cd, maps_.egress[i][v]);
            double fresh = maps_.access[i][v] + maps_.egress[i][v];
            if (keep < fresh) {
                acc(v, i) = cs;
                egr(v, i) = std::min(cd, maps_.egress[i][v]);
            } else {
                acc(v, i) = maps_.access[i][v];
                egr(v, i) = maps_.egress[i][v];
            }
        }
        return true;
    }

    /// Explicit route state for the stop-count constraints.
    struct RouteState {
        std::vector<NodeId> stop_nodes;  ///< starts with st; ends with the state's node
        std::vector<int> board_pos;      ///< per query, index into stop_nodes
        std::vector<int> alight_pos;
    };

    const RouteState& route_state(NodeId v) const { return routes_[v]; }

    /// r3/r4 relaxation: build the candidate stop sequence, repair it when
    /// it violates the stop constraints (eliminate the offending stop and
    /// reassign its riders to their cheapest surviving stop), and commit
    /// only if the repaired candidate still beats d(v). Repair work happens
    /// only for candidates that beat d(v) before repair.
    bool relax_route_state(NodeId u, NodeId v, double c) {
        double nveh = veh_[u] + c;
        if (nveh > r2_budget_) return false;

        const RouteState& from = routes_[u];
        RouteState cand = from;
        // Drop a trailing eventless position marker before extending.
        if (cand.stop_nodes.size() > 1 && count_events(cand, (int)cand.stop_nodes.size() - 1) == 0)
            cand.stop_nodes.pop_back();
        cand.stop_nodes.push_back(v);
        const int vpos = static_cast<int>(cand.stop_nodes.size()) - 1;

        double riders = 0;
        for (int i = 0; i < q_; ++i) {
            double cs = maps_.access[i][from.stop_nodes[from.board_pos[i]]];
            double cd_old = maps_.egress[i][from.stop_nodes[from.alight_pos[i]]];
            double keep = cs + std::min(cd_old, maps_.egress[i][v]);
            double fresh = maps_.access[i][v] + maps_.egress[i][v];
            if (keep < fresh) {
                cand.board_pos[i] = remap_pos(from, cand, from.board_pos[i]);
                cand.alight_pos[i] = maps_.egress[i][v] < cd_old
                                         ? vpos
                                         : remap_pos(from, cand, from.alight_pos[i]);
            } else {
                cand.board_pos[i] = vpos;
                cand.alight_pos[i] = vpos;
            }
            riders += maps_.access[i][cand.stop_nodes[cand.board_pos[i]]] +
                      maps_.egress[i][cand.stop_nodes[cand.alight_pos[i]]];
        }

        double pre = objective_value(cons_, nveh, riders);
        if (!(pre < key_[v])) return false;

        if (!repair(cand)) return false;
        riders = 0;
        for (int i = 0; i < q_; ++i) {
            riders += maps_.access[i][cand.stop_nodes[cand.board_pos[i]]] +
                      maps_.egress[i][cand.stop_nodes[cand.alight_pos[i]]];
        }
        double post = objective_value(cons_, nveh, riders);
        if (!(post < key_[v])) return false;

        key_[v] = post;
        parent_[v] = u;
        veh_[v] = nveh;
        routes_[v] = std::move(cand);
        return true;
    }

  private:
    std::size_t idx(NodeId v, int i) const {
        return (static_cast<std::size_t>(v) * q_ + i) * 2;
    }
    double& acc(NodeId v, int i) { return ledger_[idx(v, i)]; }
    double& egr(NodeId v, int i) { return ledger_[idx(v, i) + 1]; }

    int count_events(const RouteState& rs, int pos) const {
        int cnt = 0;
        for (int i = 0; i < q_; ++i) cnt += (rs.board_pos[i] == pos) + (rs.alight_pos[i] == pos);
        return cnt;
    }

    /// Event positions never sit on the dropped trailing marker, so indices
    /// survive the drop-and-extend unchanged.
    int remap_pos(const RouteState&, const RouteState&, int pos) const { return pos; }

    /// Removes the stop at `pos` and reassigns its riders. Boarding moves
    /// to the cheapest stop at or before the rider's alighting position;
    /// alighting to the cheapest at or after boarding; a rider losing both
    /// picks the cheapest ordered pair.
    void eliminate_stop(RouteState& rs, int pos) {
        std::vector<int> displaced_board, displaced_alight;
        for (int i = 0; i < q_; ++i) {
            if (rs.board_pos[i] == pos) displaced_board.push_back(i);
            if (rs.alight_pos[i] == pos) displaced_alight.push_back(i);
        }
        if (!displaced_board.empty() || !displaced_alight.empty()) ++counters_.repairs;
        rs.stop_nodes.erase(rs.stop_nodes.begin() + pos);
        auto shift = [&](int& p) {
            if (p > pos) --p;
        };
        for (int i = 0; i < q_; ++i) {
            shift(rs.board_pos[i]);
            shift(rs.alight_pos[i]);
        }
        const int last = static_cast<int>(rs.stop_nodes.size()) - 1;
        for (int i : displaced_board) {
            bool both = std::find(displaced_alight.begin(), displaced_alight.end(), i) !=
                        displaced_alight.end();
            if (both) {
                double best = kInf;
                int bb = 0, ba = last;
                for (int b = 0; b <= last; ++b) {
                    for (int a = b; a <= last; ++a) {
                        double cost = maps_.access[i][rs.stop_nodes[b]] +
                                      maps_.egress[i][rs.stop_nodes[a]];
                        if (cost < best) {
                            best = cost;
                            bb = b;
                            ba = a;
                        }
                    }
                }
                rs.board_pos[i] = bb;
                rs.alight_pos[i] = ba;
            } else {
                double best = kInf;
                int bb = 0;
                for (int b = 0; b <= rs.alight_pos[i]; ++b) {
                    double cost = maps_.access[i][rs.stop_nodes[b]];
                    if (cost < best) {
                        best = cost;
                        bb = b;
                    }
                }
                rs.board_pos[i] = bb;
            }
        }
        for (int i : displaced_alight) {
            if (std::find(displaced_board.begin(), displaced_board.end(), i) !=
                displaced_board.end())
                continue;  // handled jointly above
            double best = kInf;
            int ba = last;
            for (int a = rs.board_pos[i]; a <= last; ++a) {
                double cost = maps_.egress[i][rs.stop_nodes[a]];
                if (cost < best) {
                    best = cost;
                    ba = a;
                }
            }
            rs.alight_pos[i] = ba;
        }
    }

    /// Enforces r3 (every intermediate stop serves >= r3 riders) and r4
    /// (at most r4 stops, counting both ends). Returns false when no
    /// feasible repair exists.
    bool repair(RouteState& rs) {
        // Stale position markers (no events) are not stops; drop them.
        for (int pos = 1; pos + 1 < static_cast<int>(rs.stop_nodes.size());) {
            if (count_events(rs, pos) == 0) {
                eliminate_stop(rs, pos);
            } else {
                ++pos;
            }
        }
        // r3: eliminate under-filled intermediate stops, front to back.
        if (cons_.r3_active()) {
            for (int pos = 1; pos + 1 < static_cast<int>(rs.stop_nodes.size());) {
                int ev = count_events(rs, pos);
                if (ev < cons_.r3) {
                    eliminate_stop(rs, pos);
                    pos = 1;  // positions shifted; rescan
                } else {
                    ++pos;
                }
            }
        }
        // r4: eliminate the cheapest intermediate stop until within budget.
        if (cons_.r4_active(q_)) {
            while (static_cast<int>(rs.stop_nodes.size()) > cons_.r4) {
                int best_pos = -1, best_card = INT32_MAX;
                double best_cost = kInf;
                for (int pos = 1; pos + 1 < static_cast<int>(rs.stop_nodes.size()); ++pos) {
                    int card = count_events(rs, pos);
                    double cost = 0;
                    for (int i = 0; i < q_; ++i) {
                        if (rs.board_pos[i] == pos) cost += maps_.access[i][rs.stop_nodes[pos]];
                        if (rs.alight_pos[i] == pos) cost += maps_.egress[i][rs.stop_nodes[pos]];
                    }
                    if (card < best_card || (card == best_card && cost < best_cost)) {
                        best_card = card;
                        best_cost = cost;
                        best_pos = pos;
                    }
                }
                if (best_pos < 0) return false;  // nothing left to remove
                eliminate_stop(rs, best_pos);
            }
        }
        return true;
    }

    const Graph* g_;
    NodeId en_;
    Constraints cons_;
    int q_;
    QueryCostMaps maps_;  // r1-capped copy
    double penalty_ = 0;
    double r2_budget_ = kInf;
    bool track_routes_ = false;

    std::vector<double> key_, veh_;
    std::vector<NodeId> parent_;
    std::vector<double> ledger_;  // per node, per query: (access, egress)
    std::vector<bool> mark_;
    std::vector<NodeId> extract_count_;
    std::vector<std::uint32_t> edge_relax_;
    std::vector<RouteState> routes_;
    IndexedHeap pq_;
    SearchCounters counters_;
};

namespace heur_detail {

/// Nearest-node stop assignment along the final route (the plain variant's
/// answer extraction): each rider boards at the route node closest to the
/// source and alights at the one closest to the destination, ties toward
/// the start; when that puts boarding after alighting, the alighting is
/// re-chosen among positions at or after the boarding.
struct Assignment {
    std::vector<int> board_vp, alight_vp;  // positions in the route walk
};

inline Assignment assign_nearest(const std::vector<NodeId>& vp, const QueryCostMaps& capped,
                                 int q) {
    Assignment as;
    as.board_vp.resize(q);
    as.alight_vp.resize(q);
    for (int i = 0; i < q; ++i) {
        int bb = 0, ba = 0;
        double best = kInf;
        for (int p = 0; p < static_cast<int>(vp.size()); ++p) {
            double c = capped.access[i][vp[p]];
            if (c < best) {
                best = c;
                bb = p;
            }
        }
        best = kInf;
        for (int p = 0; p < static_cast<int>(vp.size()); ++p) {
            double c = capped.egress[i][vp[p]];
            if (c < best) {
                best = c;
                ba = p;
            }
        }
        if (bb > ba) {
            best = kInf;
            ba = bb;
            for (int p = bb; p < static_cast<int>(vp.size()); ++p) {
                double c = capped.egress[i][vp[p]];
                if (c < best) {
                    best = c;
                    ba = p;
                }
            }
        }
        as.board_vp[i] = bb;
        as.alight_vp[i] = ba;
    }
    return as;
}

}  // namespace heur_detail

namespace heur_detail {

StopPlan solve_one_version(const Graph& g, const QuerySet& qs, NodeId st, NodeId en,
                           const Constraints& cons, const QueryCostMaps& maps,
                           const HeurStopsOptions& opts);

}  // namespace heur_detail

/// Polynomial-time route-and-stops heuristic. Returns a feasible plan whose
/// cost upper-bounds the exact optimum. The reported decomposition is
/// re-derived from the emitted stop sequence (vehicle legs priced as
/// shortest paths between consecutive stops), so recomputing the objective
/// from the plan reproduces total_cost.
///
/// The revisit version runs the label-correcting search and the plain one,
/// and keeps the cheaper emitted plan. The re-committed ledgers of the raw
/// label-correcting search can propagate worse rider pairs downstream, so
/// its plan alone is not guaranteed to dominate; taking the better of the
/// two keeps the version ordering unconditional.
inline StopPlan heur_stops(const Graph& g, const QuerySet& qs, NodeId st, NodeId en,
                           const Constraints& cons, const QueryCostMaps& maps,
                           const HeurStopsOptions& opts = {}) {
    if (opts.version == HeurVersion::kAllowRevisit) {
        StopPlan corrected = heur_detail::solve_one_version(g, qs, st, en, cons, maps, opts);
        HeurStopsOptions plain = opts;
        plain.version = HeurVersion::kNoRevisit;
        StopPlan base = heur_detail::solve_one_version(g, qs, st, en, cons, maps, plain);
        StopPlan& pick = !corrected.feasible                     ? base
                         : !base.feasible                        ? corrected
                         : corrected.total_cost < base.total_cost ? corrected
                                                                  : base;
        SearchCounters merged = corrected.counters;
        merged.merge(base.counters);
        pick.counters = merged;
        return pick;
    }
    return heur_detail::solve_one_version(g, qs, st, en, cons, maps, opts);
}

inline StopPlan heur_detail::solve_one_version(const Graph& g, const QuerySet& qs, NodeId st,
                                               NodeId en, const Constraints& cons,
                                               const QueryCostMaps& maps,
                                               const HeurStopsOptions& opts) {
    const int q = qs.q();
    HeurSearch search(g, qs, st, en, cons, maps);
    search.run(opts);

    StopPlan plan;
    plan.counters = search.counters();
    if (search.key(en) == kInf) {
        plan.reason = std::isfinite(dijkstra(g, st).cost[en]) ? Infeasibility::kNoPlan
                                                              : Infeasibility::kDisconnected;
        return plan;
    }

    // Route walk from the parent chain, back to the first occurrence of st.
    // Parent pointers form a function on nodes, so a revisit means a stale
    // cycle; bail out rather than loop.
    std::vector<NodeId> vp;
    {
        std::vector<bool> seen(g.node_count(), false);
        NodeId v = en;
        while (v != kNoNode && !seen[v]) {
            seen[v] = true;
            vp.push_back(v);
            if (v == st) break;
            v = search.parent(v);
        }
        std::reverse(vp.begin(), vp.end());
        if (vp.front() != st) {
            plan.reason = Infeasibility::kNoPlan;
            return plan;
        }
    }

    const bool tracked = cons.r3_active() || cons.r4_active(q);
    std::vector<NodeId> stop_nodes;
    std::vector<int> board_idx(q), alight_idx(q);
    if (!tracked) {
        auto as = heur_detail::assign_nearest(vp, search.capped_maps(), q);
        std::vector<int> used;
        used.push_back(0);
        used.push_back(static_cast<int>(vp.size()) - 1);
        for (int i = 0; i < q; ++i) {
            used.push_back(as.board_vp[i]);
            used.push_back(as.alight_vp[i]);
        }
        std::sort(used.begin(), used.end());
        used.erase(std::unique(used.begin(), used.end()), used.end());
        for (int p : used) stop_nodes.push_back(vp[p]);
        auto stop_of = [&](int p) {
            return static_cast<int>(std::lower_bound(used.begin(), used.end(), p) - used.begin());
        };
        for (int i = 0; i < q; ++i) {
            board_idx[i] = stop_of(as.board_vp[i]);
            alight_idx[i] = stop_of(as.alight_vp[i]);
        }
    } else {
        const auto& rs = search.route_state(en);
        stop_nodes = rs.stop_nodes;
        board_idx = rs.board_pos;
        alight_idx = rs.alight_pos;
        if (stop_nodes.back() != en) stop_nodes.push_back(en);
    }
    if (stop_nodes.size() < 2) stop_nodes.push_back(en);

    plan.stops = stop_nodes;
    plan.board = board_idx;
    plan.alight = alight_idx;

    double riders = 0;
    bool r1_ok = true;
    for (int i = 0; i < q; ++i) {
        double a = maps.access[i][stop_nodes[board_idx[i]]];
        double e = maps.egress[i][stop_nodes[alight_idx[i]]];
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

inline StopPlan heur_stops(const Graph& g, const QuerySet& qs, NodeId st, NodeId en,
                           const Constraints& cons = {}, const HeurStopsOptions& opts = {}) {
    return heur_stops(g, qs, st, en, cons, compute_query_cost_maps(g, qs), opts);
}

}  // namespace roadshare
