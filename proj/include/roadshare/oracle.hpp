#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <vector>

#include "roadshare/common.hpp"
#include "roadshare/graph.hpp"
#include "roadshare/types.hpp"

// Brute-force reference implementations used by the tests and the CLI's
// --verify mode. These deliberately avoid the library's search code: costs
// come from queue-based Bellman-Ford relaxation or Floyd-Warshall, and the
// optimizers are plain enumeration or fixpoint sweeps.

namespace roadshare::oracle {

/// Queue-based Bellman-Ford (no priority queue, no heap module).
inline std::vector<double> bellman_ford(const Graph& g, NodeId source) {
    std::vector<double> dist(g.node_count(), kInf);
    std::vector<bool> queued(g.node_count(), false);
    std::deque<NodeId> queue;
    dist[source] = 0;
    queue.push_back(source);
    queued[source] = true;
    while (!queue.empty()) {
        NodeId u = queue.front();
        queue.pop_front();
        queued[u] = false;
        for (const auto& e : g.out(u)) {
            if (dist[u] + e.cost < dist[e.to]) {
                dist[e.to] = dist[u] + e.cost;
                if (!queued[e.to]) {
                    queue.push_back(e.to);
                    queued[e.to] = true;
                }
            }
        }
    }
    return dist;
}

/// All-pairs costs via Floyd-Warshall; spc[u][v] = SPC(u, v).
inline std::vector<std::vector<double>> floyd_warshall(const Graph& g) {
    const NodeId n = g.node_count();
    std::vector<std::vector<double>> spc(n, std::vector<double>(n, kInf));
    for (NodeId v = 0; v < n; ++v) spc[v][v] = 0;
    for (NodeId u = 0; u < n; ++u)
        for (const auto& e : g.out(u)) spc[u][e.to] = std::min(spc[u][e.to], e.cost);
    for (NodeId k = 0; k < n; ++k)
        for (NodeId i = 0; i < n; ++i) {
            if (spc[i][k] == kInf) continue;
            for (NodeId j = 0; j < n; ++j)
                if (spc[i][k] + spc[k][j] < spc[i][j]) spc[i][j] = spc[i][k] + spc[k][j];
        }
    return spc;
}

/// End-stop reference: evaluates the aggregate cost for all n^2 candidate
/// pairs from freshly recomputed Bellman-Ford maps. Same tie-break as the
/// production baseline (smaller st, then smaller en).
inline EndStopsResult oes_oracle(const Graph& g, const QuerySet& qs) {
    const NodeId n = g.node_count();
    Graph gt = transpose(g);
    std::vector<double> access_sum(n, 0), egress_sum(n, 0);
    std::vector<std::vector<double>> from_sources, to_dests;
    for (auto& [s, d] : qs.pairs) {
        from_sources.push_back(bellman_ford(g, s));
        to_dests.push_back(bellman_ford(gt, d));
    }
    for (NodeId v = 0; v < n; ++v)
        for (int i = 0; i < qs.q(); ++i) {
            access_sum[v] += from_sources[i][v];
            egress_sum[v] += to_dests[i][v];
        }

    EndStopsResult r;
    for (NodeId u = 0; u < n; ++u) {
        if (access_sum[u] == kInf) continue;
        std::vector<double> from_u = bellman_ford(g, u);
        for (NodeId v = 0; v < n; ++v) {
            double c = from_u[v] + access_sum[u] + egress_sum[v];
            if (c < r.total_cost) {
                r.total_cost = c;
                r.st = u;
                r.en = v;
                r.vehicle_cost = from_u[v];
            }
        }
    }
    if (r.st == kNoNode) return r;
    r.feasible = true;
    for (int i = 0; i < qs.q(); ++i) {
        r.access_costs.push_back(from_sources[i][r.st]);
        r.egress_costs.push_back(to_dests[i][r.en]);
    }
    return r;
}

/// True constrained objective of one explicit plan, or kInf if infeasible.
/// `spc` must be the all-pairs table of the working graph.
inline double plan_cost_or_inf(const std::vector<std::vector<double>>& spc,
                               const QuerySet& qs, const std::vector<NodeId>& seq,
                               const std::vector<int>& board, const std::vector<int>& alight,
                               const Constraints& cons) {
    const int t = static_cast<int>(seq.size());
    double vehicle = 0;
    for (int i = 0; i + 1 < t; ++i) vehicle += spc[seq[i]][seq[i + 1]];
    if (cons.r2_active()) {
        double budget = cons.r2 * spc[seq.front()][seq.back()];
        if (vehicle > budget * (1 + 1e-12) + 1e-12) return kInf;
    }
    double riders = 0;
    std::vector<int> events(t, 0);
    for (int i = 0; i < qs.q(); ++i) {
        if (board[i] > alight[i]) return kInf;
        double a = spc[qs.source(i)][seq[board[i]]];
        double e = spc[seq[alight[i]]][qs.dest(i)];
        if (cons.r1_active() &&
            (a > cons.r1 * (1 + 1e-12) + 1e-12 || e > cons.r1 * (1 + 1e-12) + 1e-12))
            return kInf;
        riders += a + e;
        ++events[board[i]];
        ++events[alight[i]];
    }
    if (cons.r3_active()) {
        for (int i = 1; i + 1 < t; ++i)
            if (events[i] < cons.r3) return kInf;
    }
    if (cons.r4_active(qs.q()) && t > cons.r4) return kInf;
    double total = cons.vehicle_weight() * vehicle + cons.rider_weight() * riders;
    return std::isfinite(total) ? total : kInf;
}

/// Exhaustive route-and-stops reference for tiny instances: every stop
/// sequence of length 2..max_stops (nodes may repeat), every ordered
/// board/alight assignment, constraints checked directly. Returns the
/// minimum objective, kInf when nothing is feasible.
inline double oris_oracle_exhaustive(const Graph& g, const QuerySet& qs, NodeId st, NodeId en,
                                     int max_stops, const Constraints& cons) {
    auto spc = floyd_warshall(g);
    const NodeId n = g.node_count();
    const int q = qs.q();
    double best = kInf;

    std::vector<NodeId> seq;
    std::vector<int> board(q), alight(q);

    auto eval_assignments = [&]() {
        const int t = static_cast<int>(seq.size());
        // enumerate ordered (board, alight) pairs per rider
        auto rec = [&](auto&& self, int i) -> void {
            if (i == q) {
                double c = plan_cost_or_inf(spc, qs, seq, board, alight, cons);
                if (c < best) best = c;
                return;
            }
            for (int b = 0; b < t; ++b)
                for (int a = b; a < t; ++a) {
                    board[i] = b;
                    alight[i] = a;
                    self(self, i + 1);
                }
        };
        rec(rec, 0);
    };

    auto build = [&](auto&& self, int remaining) -> void {
        if (static_cast<int>(seq.size()) >= 1 && remaining >= 0) {
            // close the sequence with en
            seq.push_back(en);
            eval_assignments();
            seq.pop_back();
        }
        if (remaining == 0) return;
        for (NodeId v = 0; v < n; ++v) {
            seq.push_back(v);
            self(self, remaining - 1);
            seq.pop_back();
        }
    };

    int limit = max_stops;
    if (cons.r4_active(q)) limit = std::min(limit, cons.r4);
    seq.push_back(st);
    build(build, limit - 2);  // middle nodes between st and en
    return best;
}

namespace bellman_detail {

// Independent trit arithmetic for the served-set fixpoint. Digit i of the
// base-3 index: 0 untouched, 1 boarded, 2 boarded+dropped.
struct Trits {
    int q;
    std::vector<std::uint64_t> pow3;
    explicit Trits(int q_) : q(q_), pow3(q_ + 1) {
        pow3[0] = 1;
        for (int i = 1; i <= q; ++i) pow3[i] = 3 * pow3[i - 1];
    }
    std::uint64_t count() const { return pow3[q]; }
    int digit(std::uint64_t m, int i) const { return static_cast<int>(m / pow3[i] % 3); }
    int weight(std::uint64_t m) const {
        int w = 0;
        for (int i = 0; i < q; ++i) w += digit(m, i);
        return w;
    }
};

struct FixLabel {
    double d;
    double vcost;
};

}  // namespace bellman_detail

/// Product-space fixpoint reference: relaxes (node, served set [, stops,
/// open]) states in sweeps until nothing changes — no priority queue, no
/// shared code with the exact solver. With a finite r2 each state keeps a
/// small Pareto set over (objective, vehicle cost). Returns the optimum at
/// the end stop with everything served, kInf if unreachable.
inline double oris_oracle_bellman(const Graph& g, const QuerySet& qs, NodeId st, NodeId en,
                                  const Constraints& cons) {
    using bellman_detail::FixLabel;
    using bellman_detail::Trits;

    const NodeId n = g.node_count();
    const int q = qs.q();
    Trits tr(q);

    // Rider cost tables from Bellman-Ford only.
    Graph gt = transpose(g);
    std::vector<std::vector<double>> acc, egr;
    for (auto& [s, d] : qs.pairs) {
        acc.push_back(bellman_ford(g, s));
        egr.push_back(bellman_ford(gt, d));
    }
    const double penalty = r1_penalty(g, q);
    if (cons.r1_active()) {
        const double cap = cons.r1 * (1 + 1e-12) + 1e-12;
        for (auto* tbl : {&acc, &egr})
            for (auto& row : *tbl)
                for (double& v : row)
                    if (v > cap) v = penalty;
    }

    const double wv = cons.vehicle_weight();
    const double wr = cons.rider_weight();
    double r2_budget = kInf;
    if (cons.r2_active()) {
        r2_budget = cons.r2 * bellman_ford(g, st)[en] * (1 + 1e-12);
    }

    const bool use_t = cons.r4_active(q);
    const bool use_open = use_t || cons.r3_active();
    const int tdim = use_t ? cons.r4 : 1;
    const int odim = use_open ? 2 : 1;
    const std::uint64_t masks = tr.count();
    const std::uint64_t total =
        static_cast<std::uint64_t>(n) * masks * tdim * odim;

    auto sid = [&](NodeId v, std::uint64_t m, int t, int open) -> std::size_t {
        std::size_t s = static_cast<std::size_t>(v);
        s = s * masks + m;
        if (use_t) s = s * tdim + (t - 1);
        if (use_open) s = s * odim + open;
        return s;
    };

    std::vector<std::vector<FixLabel>> lab(total);
    bool changed = true;
    const bool pareto = cons.r2_active();

    auto offer = [&](std::size_t s, double d, double vc) -> void {
        auto& fr = lab[s];
        if (!pareto) {
            // single best objective per state
            if (!fr.empty() && fr[0].d <= d) return;
            fr.assign(1, {d, vc});
            changed = true;
            return;
        }
        for (const FixLabel& l : fr)
            if (l.d <= d && l.vcost <= vc) return;
        fr.erase(std::remove_if(fr.begin(), fr.end(),
                                [&](const FixLabel& l) { return l.d >= d && l.vcost >= vc; }),
                 fr.end());
        fr.push_back({d, vc});
        changed = true;
    };

    offer(sid(st, 0, 1, 1), 0.0, 0.0);

    // Ordered mask list: lighter sets first so most joins settle per sweep.
    std::vector<std::uint64_t> order(masks);
    for (std::uint64_t m = 0; m < masks; ++m) order[m] = m;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint64_t a, std::uint64_t b) { return tr.weight(a) < tr.weight(b); });

    auto joins_from = [&](NodeId u, std::uint64_t m, int t, int open, const FixLabel& l) {
        bool batch = cons.r3_active() && use_open && open == 0 && u != en;
        if (!batch) {
            for (int i = 0; i < q; ++i) {
                int dg = tr.digit(m, i);
                if (dg == 2) continue;
                double jc = wr * (dg == 0 ? acc[i][u] : egr[i][u]);
                offer(sid(u, m + tr.pow3[i], t, 1), l.d + jc, l.vcost);
            }
            return;
        }
        // batches of exactly r3 units, source before own destination
        auto rec = [&](auto&& self, int i, std::uint64_t cur, double cost, int rem) -> void {
            if (rem == 0) {
                offer(sid(u, cur, t, 1), l.d + cost, l.vcost);
                return;
            }
            if (i >= q) return;
            self(self, i + 1, cur, cost, rem);
            int dg = tr.digit(cur, i);
            if (dg == 0) {
                double cs = wr * acc[i][u];
                self(self, i + 1, cur + tr.pow3[i], cost + cs, rem - 1);
                if (rem >= 2)
                    self(self, i + 1, cur + 2 * tr.pow3[i], cost + cs + wr * egr[i][u], rem - 2);
            } else if (dg == 1) {
                self(self, i + 1, cur + tr.pow3[i], cost + wr * egr[i][u], rem - 1);
            }
        };
        rec(rec, 0, m, 0.0, cons.r3);
    };

    while (changed) {
        changed = false;
        for (std::uint64_t mi = 0; mi < masks; ++mi) {
            std::uint64_t m = order[mi];
            for (NodeId u = 0; u < n; ++u) {
                for (int t = 1; t <= tdim; ++t) {
                    for (int open = 0; open < odim; ++open) {
                        std::size_t s = sid(u, m, t, open);
                        // copy: offers may touch this state's own label set
                        std::vector<FixLabel> snapshot = lab[s];
                        for (const FixLabel& l : snapshot) {
                            joins_from(u, m, t, use_open ? open : 1, l);
                            int tn = use_t ? (open ? t + 1 : t) : 1;
                            if (use_t && tn > cons.r4) continue;
                            for (const auto& e : g.out(u)) {
                                double nv = l.vcost + e.cost;
                                if (nv > r2_budget) continue;
                                offer(sid(e.to, m, tn, 0), l.d + wv * e.cost, nv);
                            }
                        }
                    }
                }
            }
        }
    }

    double best = kInf;
    for (int t = 1; t <= tdim; ++t)
        for (int open = 0; open < odim; ++open)
            for (const FixLabel& l : lab[sid(en, masks - 1, t, open)])
                best = std::min(best, l.d);
    // A result that still needs an over-cap solo leg means no plan obeys r1.
    if (cons.r1_active() && best >= penalty) return kInf;
    return best;
}

}  // namespace roadshare::oracle
