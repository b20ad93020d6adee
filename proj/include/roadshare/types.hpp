#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "roadshare/common.hpp"
#include "roadshare/graph.hpp"
#include "roadshare/sssp.hpp"

namespace roadshare {

/// Ordered list of rider (source, destination) pairs.
struct QuerySet {
    std::vector<std::pair<NodeId, NodeId>> pairs;

    int q() const { return static_cast<int>(pairs.size()); }
    NodeId source(int i) const { return pairs[i].first; }
    NodeId dest(int i) const { return pairs[i].second; }

    std::vector<NodeId> sources() const {
        std::vector<NodeId> out;
        out.reserve(pairs.size());
        for (auto& p : pairs) out.push_back(p.first);
        return out;
    }
    std::vector<NodeId> dests() const {
        std::vector<NodeId> out;
        out.reserve(pairs.size());
        for (auto& p : pairs) out.push_back(p.second);
        return out;
    }
};

/// One "<s> <d>" pair per line; `#` comments and blank lines skipped.
inline QuerySet load_queries(std::istream& in) {
    QuerySet qs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::int64_t s, d;
        if (!(ss >> s)) continue;
        if (!(ss >> d)) throw std::runtime_error("query line " + std::to_string(lineno) + ": missing destination");
        qs.pairs.emplace_back(static_cast<NodeId>(s), static_cast<NodeId>(d));
    }
    return qs;
}

inline QuerySet load_queries(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open query file: " + path);
    return load_queries(in);
}

inline void save_queries(const QuerySet& qs, std::ostream& out) {
    for (auto& [s, d] : qs.pairs) out << s << ' ' << d << '\n';
}

enum class Objective { kUnweighted, kWeighted };

/// Route-and-stops constraint knobs. Defaults make every knob inactive.
///  r1: cap on any rider's solo leg (cost units)
///  r2: vehicle route budget multiplier, cost <= r2 * SPC(st,en)
///  r3: min boardings+alightings at every intermediate stop
///  r4: max stop count, endpoints included
///  r5: vehicle weight in the weighted objective, riders weigh 1-r5
struct Constraints {
    double r1 = kInf;
    double r2 = kInf;
    int r3 = 0;
    int r4 = -1;  // -1 = unlimited
    Objective objective = Objective::kUnweighted;
    double r5 = 0.5;

    bool r1_active() const { return std::isfinite(r1); }
    bool r2_active() const { return std::isfinite(r2); }
    bool r3_active() const { return r3 >= 2; }
    bool r4_active(int q) const { return r4 >= 0 && r4 < 2 * q + 2; }
    double vehicle_weight() const { return objective == Objective::kWeighted ? r5 : 1.0; }
    double rider_weight() const { return objective == Objective::kWeighted ? 1.0 - r5 : 1.0; }

    void validate(int q) const {
        if (r1_active() && r1 < 0) throw std::invalid_argument("r1 must be >= 0");
        if (r2_active() && r2 < 1) throw std::invalid_argument("r2 must be >= 1");
        if (r3 < 0 || r3 > 2 * q) throw std::invalid_argument("r3 must be in [0, 2q]");
        if (r4 >= 0 && r4 < 2) throw std::invalid_argument("r4 must be >= 2");
        if (objective == Objective::kWeighted && (r5 < 1.0 / 3.0 - 1e-12 || r5 > 1 + 1e-12))
            throw std::invalid_argument("r5 must be in [1/3, 1]");
    }
};

enum class Infeasibility {
    kNone,
    kDisconnected,    ///< required node unreachable
    kSoloLegOverR1,   ///< best plan needs a solo leg beyond r1
    kNoPlan,          ///< constrained search exhausted without reaching the end stop
};

inline const char* to_string(Infeasibility r) {
    switch (r) {
        case Infeasibility::kNone: return "feasible";
        case Infeasibility::kDisconnected: return "disconnected";
        case Infeasibility::kSoloLegOverR1: return "solo-leg-over-r1";
        case Infeasibility::kNoPlan: return "no-feasible-plan";
    }
    return "?";
}

/// Answer to the end-stop query: the (st, en) pair minimizing
///   SPC(st,en) + sum_i SPC(s_i,st) + sum_i SPC(en,d_i).
struct EndStopsResult {
    bool feasible = false;
    NodeId st = kNoNode;
    NodeId en = kNoNode;
    double total_cost = kInf;
    double vehicle_cost = kInf;
    std::vector<double> access_costs;  ///< per query: SPC(s_i, st)
    std::vector<double> egress_costs;  ///< per query: SPC(en, d_i)
    SearchCounters counters;
};

/// Answer to the route-and-stops query.
struct StopPlan {
    bool feasible = false;
    Infeasibility reason = Infeasibility::kNone;
    std::vector<NodeId> stops;  ///< P(1)=st .. P(t)=en
    std::vector<int> board;     ///< per query, index into stops
    std::vector<int> alight;    ///< per query, index into stops, board <= alight
    double total_cost = kInf;   ///< value of the active objective
    double vehicle_cost = kInf; ///< sum of SPC between consecutive stops
    std::vector<std::pair<double, double>> solo_costs;  ///< per query (access, egress)
    SearchCounters counters;

    int stop_count() const { return static_cast<int>(stops.size()); }
};

/// Shortest-path cost tables between the riders' query nodes and every
/// graph node; both route solvers consume these. access[i][v] = SPC(s_i,v),
/// egress[i][v] = SPC(v,d_i).
struct QueryCostMaps {
    std::vector<std::vector<double>> access;
    std::vector<std::vector<double>> egress;

    int q() const { return static_cast<int>(access.size()); }
};

inline QueryCostMaps compute_query_cost_maps(const Graph& g, const QuerySet& qs) {
    QueryCostMaps maps;
    Graph gt = transpose(g);
    for (auto& [s, d] : qs.pairs) {
        maps.access.push_back(dijkstra(g, s).cost);
        maps.egress.push_back(dijkstra(gt, d).cost);
    }
    return maps;
}

/// Over-limit penalty substituted for solo legs longer than r1. Finite but
/// larger than any feasible plan cost, so an optimal answer containing it
/// certifies that no plan satisfies the cap.
inline double r1_penalty(const Graph& g, int q) {
    return 1.0 + (4.0 * q + 2.0) * g.total_edge_cost();
}

/// Applies the r1 substitution in place: entries above the cap become the
/// penalty value. No-op when r1 is inactive.
inline void apply_r1_cap(QueryCostMaps& maps, const Constraints& cons, double penalty) {
    if (!cons.r1_active()) return;
    const double cap = cons.r1 * (1 + 1e-12) + 1e-12;
    for (auto* table : {&maps.access, &maps.egress}) {
        for (auto& row : *table) {
            for (double& v : row) {
                if (v > cap) v = penalty;
            }
        }
    }
}

/// Objective value from its two components under the active mode.
inline double objective_value(const Constraints& cons, double vehicle, double riders) {
    return cons.vehicle_weight() * vehicle + cons.rider_weight() * riders;
}

/// Re-derives vehicle cost, solo costs, and the objective from a stop
/// sequence plus board/alight assignments. `maps` must be the un-capped
/// tables; the r1 check is done on the true leg lengths.
struct PlanEvaluation {
    double vehicle_cost = 0;
    double rider_cost = 0;
    double total = 0;
    bool r1_ok = true;
    bool r2_ok = true;
    bool r3_ok = true;
    bool r4_ok = true;
    bool ordered_ok = true;

    bool feasible() const { return r1_ok && r2_ok && r3_ok && r4_ok && ordered_ok; }
};

inline PlanEvaluation evaluate_plan(const Graph& g, const QuerySet& qs,
                                    const std::vector<NodeId>& stops,
                                    const std::vector<int>& board, const std::vector<int>& alight,
                                    const QueryCostMaps& maps, const Constraints& cons) {
    PlanEvaluation ev;
    const int t = static_cast<int>(stops.size());
    for (int i = 0; i + 1 < t; ++i) {
        if (stops[i] == stops[i + 1]) continue;
        ev.vehicle_cost += dijkstra(g, stops[i]).cost[stops[i + 1]];
    }
    std::vector<int> events(t, 0);
    for (int i = 0; i < qs.q(); ++i) {
        if (board[i] > alight[i]) ev.ordered_ok = false;
        double a = maps.access[i][stops[board[i]]];
        double e = maps.egress[i][stops[alight[i]]];
        ev.rider_cost += a + e;
        if (cons.r1_active() && (a > cons.r1 * (1 + 1e-12) + 1e-12 || e > cons.r1 * (1 + 1e-12) + 1e-12))
            ev.r1_ok = false;
        ++events[board[i]];
        ++events[alight[i]];
    }
    if (cons.r2_active()) {
        double budget = cons.r2 * dijkstra(g, stops.front()).cost[stops.back()];
        if (ev.vehicle_cost > budget * (1 + 1e-12) + 1e-12) ev.r2_ok = false;
    }
    if (cons.r3_active()) {
        for (int i = 1; i + 1 < t; ++i)
            if (events[i] < cons.r3) ev.r3_ok = false;
    }
    if (cons.r4_active(qs.q()) && t > cons.r4) ev.r4_ok = false;
    ev.total = objective_value(cons, ev.vehicle_cost, ev.rider_cost);
    return ev;
}

}  // namespace roadshare
