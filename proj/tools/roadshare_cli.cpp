// roadshare command-line front end: solve single instances, generate
// synthetic instances and graphs, run parameter sweeps, and emit CSV
// metrics. Exit codes: 0 ok, 1 verification mismatch, 2 bad flags,
// 3 infeasible instance.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "roadshare/graph.hpp"
#include "roadshare/oes.hpp"
#include "roadshare/oracle.hpp"
#include "roadshare/oris_exact.hpp"
#include "roadshare/oris_heuristic.hpp"
#include "roadshare/querygen.hpp"
#include "roadshare/sssp.hpp"
#include "roadshare/types.hpp"

using namespace roadshare;
using nlohmann::json;

namespace {

constexpr const char* kCsvHeader =
    "param,value,algo,seed,objective,relative_error,wall_time_s,extractions,relaxations,"
    "peak_frontier,peak_states";

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string fmt_double(double v) {
    if (!std::isfinite(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

struct CsvRow {
    std::string param;
    std::string value;
    std::string algo;
    std::uint64_t seed = 0;
    double objective = kInf;
    std::optional<double> relative_error;
    double wall_time_s = 0;
    SearchCounters counters;

    std::string to_line() const {
        std::string out;
        out += param + "," + value + "," + algo + "," + std::to_string(seed) + ",";
        out += fmt_double(objective) + ",";
        out += (relative_error ? fmt_double(*relative_error) : std::string{}) + ",";
        out += fmt_double(wall_time_s) + ",";
        out += std::to_string(counters.extractions) + "," + std::to_string(counters.relaxations) +
               "," + std::to_string(counters.peak_frontier) + "," +
               std::to_string(counters.peak_states);
        return out;
    }
};

void write_csv(const std::string& path, const std::vector<std::string>& comments,
               const std::vector<CsvRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write csv: " + path);
    for (const auto& c : comments) out << "# " << c << "\n";
    out << kCsvHeader << "\n";
    for (const auto& r : rows) out << r.to_line() << "\n";
}

struct GenFlags {
    double cluster_distance = 60.0;
    double cluster_area = 7.0;
    double euclid_distance = 75.0;
    double query_space = 50.0;
    int q = 30;
};

struct SolveArgs {
    std::string graph_path;
    std::string queries_path;
    std::string algo;
    std::string version = "no-revisit";
    bool prune = false;
    bool early_stop = true;
    double r1 = kInf;
    double r2 = kInf;
    int r3 = 0;
    int r4 = -1;
    double r5 = 0.5;
    std::string objective = "unweighted";
    std::uint64_t seed = 1;
    bool verify = false;
    std::string csv_path;
    std::string gen;  // "", "oes", "oris"
    GenFlags gen_flags;
    std::int64_t st = -1;
    std::int64_t en = -1;
    int reps = 1;  ///< timed repetitions; the reported wall time is the median
};

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

Constraints make_constraints(const SolveArgs& a) {
    Constraints c;
    c.r1 = a.r1;
    c.r2 = a.r2;
    c.r3 = a.r3;
    c.r4 = a.r4;
    c.r5 = a.r5;
    c.objective = a.objective == "weighted" ? Objective::kWeighted : Objective::kUnweighted;
    return c;
}

void print_counters(const SearchCounters& c) {
    std::cout << "  extractions:   " << c.extractions << "\n"
              << "  relaxations:   " << c.relaxations << "\n"
              << "  peak_frontier: " << c.peak_frontier << "\n"
              << "  peak_states:   " << c.peak_states << "\n";
}

int run_solve_oes(const SolveArgs& args) {
    Graph g = load_graph(args.graph_path);
    QuerySet qs;
    if (args.gen == "oes") {
        OesGenConfig cfg;
        cfg.cluster_distance_pct = args.gen_flags.cluster_distance;
        cfg.cluster_area_pct = args.gen_flags.cluster_area;
        cfg.q = args.gen_flags.q;
        cfg.seed = args.seed;
        qs = gen_oes_instance(g, cfg).queries;
    } else {
        qs = load_queries(args.queries_path);
    }

    if (args.algo != "baseline" && args.algo != "fast") {
        std::cerr << "unknown --algo for oes: " << args.algo << "\n";
        return 2;
    }
    EndStopsResult res;
    std::vector<double> times;
    for (int rep = 0; rep < std::max(1, args.reps); ++rep) {
        double t0 = now_seconds();
        res = args.algo == "baseline" ? baseline_end_stops(g, qs)
                                      : fast_end_stops(g, qs, {.prune = args.prune});
        times.push_back(now_seconds() - t0);
    }
    double elapsed = median_of(times);

    if (!res.feasible) {
        std::cout << "infeasible: no end-stop pair is reachable by all riders\n";
        return 3;
    }
    std::cout << "st=" << res.st << " en=" << res.en << "\n"
              << "total_cost=" << fmt_double(res.total_cost)
              << " vehicle_cost=" << fmt_double(res.vehicle_cost) << "\n";
    for (int i = 0; i < qs.q(); ++i) {
        std::cout << "  rider " << i << ": access=" << fmt_double(res.access_costs[i])
                  << " egress=" << fmt_double(res.egress_costs[i]) << "\n";
    }
    std::cout << "wall_time_s=" << fmt_double(elapsed) << "\n";
    print_counters(res.counters);

    int rc = 0;
    if (args.verify) {
        if (g.node_count() <= 500) {
            EndStopsResult ref = oracle::oes_oracle(g, qs);
            if (ref.feasible != res.feasible || ref.total_cost != res.total_cost) {
                std::cout << "VERIFY: MISMATCH (oracle " << fmt_double(ref.total_cost) << ")\n";
                rc = 1;
            } else {
                std::cout << "VERIFY: ok (matches end-stop oracle)\n";
            }
        } else {
            std::cout << "VERIFY: skipped (oracle is quadratic; graph too large)\n";
        }
    }
    if (!args.csv_path.empty()) {
        CsvRow row;
        row.param = "";
        row.value = "";
        row.algo = args.algo;
        row.seed = args.seed;
        row.objective = res.total_cost;
        row.wall_time_s = elapsed;
        row.counters = res.counters;
        write_csv(args.csv_path, {}, {row});
    }
    return rc;
}

int run_solve_oris(const SolveArgs& args) {
    Graph g = load_graph(args.graph_path);
    QuerySet qs;
    NodeId st, en;
    Constraints cons = make_constraints(args);
    if (args.gen == "oris") {
        OrisGenConfig cfg;
        cfg.euclid_distance_pct = args.gen_flags.euclid_distance;
        cfg.query_space_pct = args.gen_flags.query_space;
        cfg.q = args.gen_flags.q;
        cfg.seed = args.seed;
        cfg.r5 = args.r5;
        OrisInstance inst = gen_oris_instance(g, cfg);
        qs = inst.queries;
        st = inst.st;
        en = inst.en;
    } else {
        qs = load_queries(args.queries_path);
        if (args.st < 0 || args.en < 0) {
            std::cerr << "--st and --en are required with --queries for oris\n";
            return 2;
        }
        st = static_cast<NodeId>(args.st);
        en = static_cast<NodeId>(args.en);
    }

    if (args.algo != "exact" && args.algo != "heur") {
        std::cerr << "unknown --algo for oris: " << args.algo << "\n";
        return 2;
    }
    StopPlan plan;
    std::vector<double> times;
    for (int rep = 0; rep < std::max(1, args.reps); ++rep) {
        double t0 = now_seconds();
        if (args.algo == "exact") {
            plan = opt_stops(g, qs, st, en, cons, OptStopsOptions{.early_stop = args.early_stop});
        } else {
            HeurStopsOptions opts;
            opts.version = args.version == "allow-revisit" ? HeurVersion::kAllowRevisit
                                                           : HeurVersion::kNoRevisit;
            opts.prune = args.prune;
            plan = heur_stops(g, qs, st, en, cons, opts);
        }
        times.push_back(now_seconds() - t0);
    }
    double elapsed = median_of(times);

    if (!plan.feasible) {
        std::cout << "infeasible: " << to_string(plan.reason) << "\n";
        return 3;
    }
    std::cout << "stops:";
    for (NodeId v : plan.stops) std::cout << ' ' << v;
    std::cout << "\n";
    for (int i = 0; i < qs.q(); ++i) {
        std::cout << "  rider " << i << ": board " << plan.stops[plan.board[i]] << " alight "
                  << plan.stops[plan.alight[i]] << " solo=("
                  << fmt_double(plan.solo_costs[i].first) << ", "
                  << fmt_double(plan.solo_costs[i].second) << ")\n";
    }
    std::cout << "total_cost=" << fmt_double(plan.total_cost)
              << " vehicle_cost=" << fmt_double(plan.vehicle_cost) << "\n"
              << "wall_time_s=" << fmt_double(elapsed) << "\n";
    print_counters(plan.counters);

    int rc = 0;
    if (args.verify) {
        bool ok = true;
        // the emitted plan must reproduce its own reported objective
        QueryCostMaps maps = compute_query_cost_maps(g, qs);
        PlanEvaluation ev = evaluate_plan(g, qs, plan.stops, plan.board, plan.alight, maps, cons);
        if (std::abs(ev.total - plan.total_cost) >
            1e-9 * std::max(1.0, std::abs(plan.total_cost))) {
            std::cout << "VERIFY: MISMATCH (recomputed " << fmt_double(ev.total) << ")\n";
            ok = false;
        }
        if (!ev.feasible()) {
            std::cout << "VERIFY: MISMATCH (emitted plan violates a constraint)\n";
            ok = false;
        }
        std::uint64_t states = 1;
        for (int i = 0; i < qs.q() && states < (1ULL << 22); ++i) states *= 3;
        states *= g.node_count();
        if (g.node_count() <= 200 && qs.q() <= 4) {
            double ref = oracle::oris_oracle_bellman(g, qs, st, en, cons);
            bool match = args.algo == "exact"
                             ? std::abs(ref - plan.total_cost) <=
                                   1e-9 * std::max(1.0, std::abs(ref))
                             : plan.total_cost >= ref - 1e-9 * std::max(1.0, std::abs(ref));
            if (!match) {
                std::cout << "VERIFY: MISMATCH (fixpoint oracle " << fmt_double(ref) << ")\n";
                ok = false;
            }
        } else if (args.algo == "exact") {
            std::cout << "VERIFY: oracle skipped (instance too large); self-check only\n";
        }
        if (ok) std::cout << "VERIFY: ok\n";
        if (!ok) rc = 1;
    }
    if (!args.csv_path.empty()) {
        CsvRow row;
        row.param = "";
        row.value = "";
        row.algo = args.algo;
        row.seed = args.seed;
        row.objective = plan.total_cost;
        row.wall_time_s = elapsed;
        row.counters = plan.counters;
        write_csv(args.csv_path, {}, {row});
    }
    return rc;
}

struct SweepPoint {
    double value;
    std::string label;
};

std::vector<SweepPoint> sweep_values(const std::string& param) {
    auto linear = [](double lo, double hi, double step) {
        std::vector<SweepPoint> out;
        for (double v = lo; v <= hi + 1e-9; v += step) out.push_back({v, fmt_double(v)});
        return out;
    };
    if (param == "cluster-distance" || param == "euclid-distance") return linear(30, 90, 15);
    if (param == "cluster-area") return linear(1, 13, 3);
    if (param == "queries") return linear(10, 50, 10);
    if (param == "query-space") return linear(10, 90, 20);
    if (param == "r5") return linear(0.4, 0.8, 0.1);
    if (param == "r1") {
        std::vector<SweepPoint> out;
        for (double v = 0.001; v <= 10 + 1e-9; v *= 10) out.push_back({v, fmt_double(v)});
        return out;
    }
    throw CLI::ValidationError("--param", "unknown sweep parameter: " + param);
}

int run_sweep(const std::string& graph_path, const std::string& gen, const std::string& param,
              int reps, std::uint64_t seed, const std::string& csv_path,
              std::vector<std::string> algos, const GenFlags& base) {
    Graph g = load_graph(graph_path);
    if (algos.empty()) {
        algos = gen == "oes" ? std::vector<std::string>{"baseline", "fast"}
                             : std::vector<std::string>{"exact", "heur"};
    }
    std::vector<SweepPoint> points = sweep_values(param);
    std::vector<CsvRow> rows;
    std::vector<std::string> comments;
    comments.push_back("sweep gen=" + gen + " param=" + param + " reps=" + std::to_string(reps) +
                       " base_seed=" + std::to_string(seed));
    comments.push_back("defaults cluster_distance=" + fmt_double(base.cluster_distance) +
                       " cluster_area=" + fmt_double(base.cluster_area) +
                       " euclid_distance=" + fmt_double(base.euclid_distance) +
                       " query_space=" + fmt_double(base.query_space) +
                       " q=" + std::to_string(base.q));

    for (const auto& pt : points) {
        struct Acc {
            double objective = 0, wall = 0, rel = 0;
            int n = 0, rel_n = 0;
            SearchCounters counters;
        };
        std::map<std::string, Acc> acc;
        for (int rep = 0; rep < reps; ++rep) {
            std::uint64_t rep_seed = seed + 1000 * rep;
            if (gen == "oes") {
                OesGenConfig cfg;
                cfg.cluster_distance_pct =
                    param == "cluster-distance" ? pt.value : base.cluster_distance;
                cfg.cluster_area_pct = param == "cluster-area" ? pt.value : base.cluster_area;
                cfg.q = param == "queries" ? static_cast<int>(pt.value) : base.q;
                cfg.seed = rep_seed;
                QuerySet qs = gen_oes_instance(g, cfg).queries;
                for (const auto& algo : algos) {
                    double t0 = now_seconds();
                    EndStopsResult r = algo == "baseline"
                                           ? baseline_end_stops(g, qs)
                                           : fast_end_stops(g, qs, {.prune = true});
                    double dt = now_seconds() - t0;
                    auto& a = acc[algo];
                    a.objective += r.total_cost;
                    a.wall += dt;
                    a.counters.merge(r.counters);
                    ++a.n;
                }
            } else {
                OrisGenConfig cfg;
                cfg.euclid_distance_pct =
                    param == "euclid-distance" ? pt.value : base.euclid_distance;
                cfg.query_space_pct = param == "query-space" ? pt.value : base.query_space;
                cfg.q = param == "queries" ? static_cast<int>(pt.value) : base.q;
                cfg.seed = rep_seed;
                cfg.r1_pct = param == "r1" ? pt.value : kInf;
                cfg.r5 = param == "r5" ? pt.value : 0.5;
                OrisInstance inst = gen_oris_instance(g, cfg);
                Constraints cons;
                cons.r1 = inst.r1_value;
                if (param == "r5") {
                    cons.objective = Objective::kWeighted;
                    cons.r5 = cfg.r5;
                }
                QueryCostMaps maps = compute_query_cost_maps(g, inst.queries);
                double exact_cost = kInf;
                for (const auto& algo : algos) {
                    double t0 = now_seconds();
                    StopPlan plan;
                    bool ran = true;
                    if (algo == "exact") {
                        try {
                            plan = opt_stops(g, inst.queries, inst.st, inst.en, cons, maps, {});
                        } catch (const StateBudgetError&) {
                            ran = false;
                        }
                    } else {
                        plan = heur_stops(g, inst.queries, inst.st, inst.en, cons, maps, {});
                    }
                    double dt = now_seconds() - t0;
                    if (!ran) continue;
                    auto& a = acc[algo];
                    a.objective += plan.total_cost;
                    a.wall += dt;
                    a.counters.merge(plan.counters);
                    ++a.n;
                    if (algo == "exact") exact_cost = plan.total_cost;
                    if (algo == "heur" && std::isfinite(exact_cost) && exact_cost > 0) {
                        a.rel += (plan.total_cost - exact_cost) / exact_cost;
                        ++a.rel_n;
                    }
                }
            }
        }
        for (const auto& algo : algos) {
            auto it = acc.find(algo);
            if (it == acc.end() || it->second.n == 0) continue;
            const Acc& a = it->second;
            CsvRow row;
            row.param = param;
            row.value = pt.label;
            row.algo = algo;
            row.seed = seed;
            row.objective = a.objective / a.n;
            if (a.rel_n > 0) row.relative_error = a.rel / a.rel_n;
            row.wall_time_s = a.wall / a.n;
            row.counters = a.counters;
            rows.push_back(row);
        }
    }
    write_csv(csv_path, comments, rows);
    std::cout << "wrote " << rows.size() << " rows to " << csv_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"road-network shared-vehicle route and stop optimizer"};
    app.require_subcommand(1);

    SolveArgs args;

    auto* solve = app.add_subcommand("solve", "solve one instance");
    solve->require_subcommand(1);
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--graph", args.graph_path, "graph file")->required();
        cmd->add_option("--queries", args.queries_path, "query file");
        cmd->add_option("--seed", args.seed, "seed for --gen");
        cmd->add_flag("--verify", args.verify, "cross-check against the oracle");
        cmd->add_option("--csv", args.csv_path, "append metrics row to CSV");
        cmd->add_option("--q", args.gen_flags.q, "generated query count");
        cmd->add_option("--reps", args.reps, "timed repetitions (median reported)");
    };

    auto* oes = solve->add_subcommand("oes", "optimal end-stops");
    add_common(oes);
    oes->add_option("--algo", args.algo, "baseline|fast")->required();
    oes->add_flag("--prune", args.prune, "shared-bound pruning (fast solver)");
    oes->add_option("--gen", args.gen, "generate instance: oes")
        ->check(CLI::IsMember({"oes"}));
    oes->add_option("--cluster-distance", args.gen_flags.cluster_distance,
                    "% of max node distance");
    oes->add_option("--cluster-area", args.gen_flags.cluster_area, "% of total area");

    auto* oris = solve->add_subcommand("oris", "optimal route and stops");
    add_common(oris);
    oris->add_option("--algo", args.algo, "exact|heur")->required();
    oris->add_option("--version", args.version, "no-revisit|allow-revisit")
        ->check(CLI::IsMember({"no-revisit", "allow-revisit"}));
    oris->add_flag("--prune", args.prune, "route-cost pruning (heur solver)");
    oris->add_flag("!--no-early-stop", args.early_stop, "exact solver runs to exhaustion");
    oris->add_option("--st", args.st, "start stop node id");
    oris->add_option("--en", args.en, "end stop node id");
    oris->add_option("--r1", args.r1, "solo leg cap");
    oris->add_option("--r2", args.r2, "vehicle budget multiplier");
    oris->add_option("--r3", args.r3, "min riders per intermediate stop");
    oris->add_option("--r4", args.r4, "max stop count");
    auto* r5_opt = oris->add_option("--r5", args.r5, "vehicle weight (implies weighted mode)");
    auto* obj_opt = oris->add_option("--objective", args.objective, "unweighted|weighted")
                        ->check(CLI::IsMember({"unweighted", "weighted"}));
    oris->parse_complete_callback([&args, r5_opt, obj_opt] {
        if (r5_opt->count() > 0 && obj_opt->count() == 0) args.objective = "weighted";
    });
    oris->add_option("--gen", args.gen, "generate instance: oris")
        ->check(CLI::IsMember({"oris"}));
    oris->add_option("--euclid-distance", args.gen_flags.euclid_distance,
                     "% of max node distance");
    oris->add_option("--query-space", args.gen_flags.query_space, "% of total area");

    // sweep
    std::string sweep_graph, sweep_gen, sweep_param, sweep_csv;
    int sweep_reps = 10;
    std::uint64_t sweep_seed = 1;
    std::vector<std::string> sweep_algos;
    GenFlags sweep_base;
    auto* sweep = app.add_subcommand("sweep", "parameter sweep with CSV output");
    sweep->add_option("--graph", sweep_graph)->required();
    sweep->add_option("--gen", sweep_gen, "oes|oris")
        ->required()
        ->check(CLI::IsMember({"oes", "oris"}));
    sweep->add_option("--param", sweep_param,
                      "cluster-distance|cluster-area|queries|euclid-distance|query-space|r1|r5")
        ->required();
    sweep->add_option("--reps", sweep_reps, "repetitions per value");
    sweep->add_option("--seed", sweep_seed);
    sweep->add_option("--csv", sweep_csv)->required();
    sweep->add_option("--algo", sweep_algos, "algorithms to run (repeatable)");
    sweep->add_option("--q", sweep_base.q, "default query count");

    // gen
    std::string gen_kind, gen_graph_path, gen_out;
    std::uint64_t gen_seed = 1;
    int gen_nodes = 10000;
    GenFlags gen_flags;
    double gen_r1_pct = kInf, gen_r5 = 0.5;
    auto* gen = app.add_subcommand("gen", "generate a graph or an instance");
    gen->add_option("kind", gen_kind, "graph|oes|oris")
        ->required()
        ->check(CLI::IsMember({"graph", "oes", "oris"}));
    gen->add_option("--graph", gen_graph_path, "input graph (instance generation)");
    gen->add_option("--out", gen_out, "output path (graph file or query file)")->required();
    gen->add_option("--seed", gen_seed);
    gen->add_option("--nodes", gen_nodes, "approximate node count (gen graph)");
    gen->add_option("--q", gen_flags.q);
    gen->add_option("--cluster-distance", gen_flags.cluster_distance);
    gen->add_option("--cluster-area", gen_flags.cluster_area);
    gen->add_option("--euclid-distance", gen_flags.euclid_distance);
    gen->add_option("--query-space", gen_flags.query_space);
    gen->add_option("--r1-pct", gen_r1_pct, "r1 as % of SPC(st,en)");
    gen->add_option("--r5", gen_r5);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help() << "\n";
        return 2;
    }

    try {
        if (solve->parsed()) {
            if (oes->parsed()) return run_solve_oes(args);
            if (oris->parsed()) return run_solve_oris(args);
        }
        if (sweep->parsed()) {
            return run_sweep(sweep_graph, sweep_gen, sweep_param, sweep_reps, sweep_seed,
                             sweep_csv, sweep_algos, sweep_base);
        }
        if (gen->parsed()) {
            if (gen_kind == "graph") {
                Graph g = make_road_graph(gen_nodes, gen_seed);
                std::ofstream out(gen_out);
                if (!out) throw std::runtime_error("cannot write " + gen_out);
                save_graph(g, out);
                std::cout << "wrote graph n=" << g.node_count() << " m=" << g.edge_count()
                          << " to " << gen_out << "\n";
                return 0;
            }
            Graph g = load_graph(gen_graph_path);
            json meta;
            meta["seed"] = gen_seed;
            meta["distance_tolerance"] = kDistanceTolerance;
            QuerySet qs;
            if (gen_kind == "oes") {
                OesGenConfig cfg;
                cfg.cluster_distance_pct = gen_flags.cluster_distance;
                cfg.cluster_area_pct = gen_flags.cluster_area;
                cfg.q = gen_flags.q;
                cfg.seed = gen_seed;
                OesInstance inst = gen_oes_instance(g, cfg);
                qs = inst.queries;
                meta["kind"] = "oes";
                meta["cluster_distance_pct"] = cfg.cluster_distance_pct;
                meta["cluster_area_pct"] = cfg.cluster_area_pct;
                meta["q"] = cfg.q;
                meta["center1"] = inst.center1;
                meta["center2"] = inst.center2;
                meta["window_inflated"] = inst.inflated;
            } else {
                OrisGenConfig cfg;
                cfg.euclid_distance_pct = gen_flags.euclid_distance;
                cfg.query_space_pct = gen_flags.query_space;
                cfg.q = gen_flags.q;
                cfg.seed = gen_seed;
                cfg.r1_pct = gen_r1_pct;
                cfg.r5 = gen_r5;
                OrisInstance inst = gen_oris_instance(g, cfg);
                qs = inst.queries;
                meta["kind"] = "oris";
                meta["euclid_distance_pct"] = cfg.euclid_distance_pct;
                meta["query_space_pct"] = cfg.query_space_pct;
                meta["q"] = cfg.q;
                meta["st"] = inst.st;
                meta["en"] = inst.en;
                meta["r1_pct"] = std::isfinite(cfg.r1_pct) ? json(cfg.r1_pct) : json();
                meta["r1_value"] =
                    std::isfinite(inst.r1_value) ? json(inst.r1_value) : json();
                meta["r5"] = cfg.r5;
                meta["space_inflated"] = inst.inflated;
            }
            std::ofstream out(gen_out);
            if (!out) throw std::runtime_error("cannot write " + gen_out);
            save_queries(qs, out);
            std::ofstream mout(gen_out + ".meta.json");
            mout << meta.dump(2) << "\n";
            std::cout << "wrote " << qs.q() << " queries to " << gen_out << "\n";
            return 0;
        }
    } catch (const StateBudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
