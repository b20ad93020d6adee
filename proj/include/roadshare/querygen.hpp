#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "roadshare/common.hpp"
#include "roadshare/graph.hpp"
#include "roadshare/rng.hpp"
#include "roadshare/types.hpp"

namespace roadshare {

/// End-stop instance shape: two square windows whose centers sit about
/// cluster_distance_pct of the maximum node-to-node Euclidean distance
/// apart, each covering cluster_area_pct of the bounding-box area.
struct OesGenConfig {
    double cluster_distance_pct = 60.0;  // default sweep center
    double cluster_area_pct = 7.0;
    int q = 30;
    std::uint64_t seed = 1;
};

/// Route-and-stops instance shape: endpoints about euclid_distance_pct of
/// the max distance apart, query nodes drawn from an ellipse around them
/// covering query_space_pct of the bounding-box area.
struct OrisGenConfig {
    double euclid_distance_pct = 75.0;
    double query_space_pct = 50.0;
    int q = 30;
    std::uint64_t seed = 1;
    double r1_pct = kInf;  ///< r1 as % of SPC(st,en); inf = unconstrained
    double r5 = 0.5;
};

/// Pair-distance tolerance when hunting for nodes at a target Euclidean
/// distance, as a fraction of the max distance.
constexpr double kDistanceTolerance = 0.02;

struct OesInstance {
    QuerySet queries;
    NodeId center1 = kNoNode;  ///< window centers actually used
    NodeId center2 = kNoNode;
    double window_side = 0;
    bool inflated = false;  ///< a window had to grow to contain nodes
};

struct OrisInstance {
    NodeId st = kNoNode;
    NodeId en = kNoNode;
    QuerySet queries;
    double r1_value = kInf;  ///< resolved from r1_pct against SPC(st,en)
    bool inflated = false;
};

namespace gen_detail {

struct Pt {
    double x, y;
    NodeId id;
};

inline double cross(const Pt& o, const Pt& a, const Pt& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

/// Andrew monotone chain; returns hull points in counter-clockwise order.
inline std::vector<Pt> convex_hull(std::vector<Pt> pts) {
    std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) {
        if (a.x != b.x) return a.x < b.x;
        return a.y < b.y;
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Pt& a, const Pt& b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Pt> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

/// Maximum node-to-node Euclidean distance via rotating calipers on the
/// convex hull.
inline double max_euclidean_distance(const Graph& g) {
    std::vector<Pt> pts;
    pts.reserve(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) pts.push_back({g.x[v], g.y[v], v});
    std::vector<Pt> hull = convex_hull(std::move(pts));
    const std::size_t h = hull.size();
    if (h == 1) return 0;
    if (h == 2) return std::hypot(hull[0].x - hull[1].x, hull[0].y - hull[1].y);
    double best = 0;
    std::size_t j = 1;
    for (std::size_t i = 0; i < h; ++i) {
        const Pt& a = hull[i];
        const Pt& b = hull[(i + 1) % h];
        for (;;) {
            double cur = std::abs(cross(a, b, hull[j]));
            double nxt = std::abs(cross(a, b, hull[(j + 1) % h]));
            if (nxt > cur) {
                j = (j + 1) % h;
            } else {
                break;
            }
        }
        best = std::max(best, std::hypot(a.x - hull[j].x, a.y - hull[j].y));
        best = std::max(best, std::hypot(b.x - hull[j].x, b.y - hull[j].y));
    }
    return best;
}

/// Seeded hunt for a node pair whose distance is within the tolerance of
/// target_dist; falls back to the closest pair sampled.
inline std::pair<NodeId, NodeId> pair_at_distance(const Graph& g, Rng& rng, double target_dist,
                                                  double tol_abs) {
    const NodeId n = g.node_count();
    NodeId best_a = 0, best_b = 0;
    double best_err = kInf;
    const int attempts = 20000;
    for (int it = 0; it < attempts; ++it) {
        NodeId a = static_cast<NodeId>(rng.next_below(n));
        NodeId b = static_cast<NodeId>(rng.next_below(n));
        if (a == b) continue;
        double d = std::hypot(g.x[a] - g.x[b], g.y[a] - g.y[b]);
        double err = std::abs(d - target_dist);
        if (err < best_err) {
            best_err = err;
            best_a = a;
            best_b = b;
            if (err <= tol_abs) break;
        }
    }
    return {best_a, best_b};
}

inline std::vector<NodeId> nodes_in_window(const Graph& g, double cx, double cy, double side) {
    std::vector<NodeId> out;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (std::abs(g.x[v] - cx) <= side / 2 && std::abs(g.y[v] - cy) <= side / 2)
            out.push_back(v);
    }
    return out;
}

}  // namespace gen_detail

inline OesInstance gen_oes_instance(const Graph& g, const OesGenConfig& cfg) {
    Rng rng(cfg.seed);
    const double ed = gen_detail::max_euclidean_distance(g);
    const double target = cfg.cluster_distance_pct / 100.0 * ed;
    auto [c1, c2] = gen_detail::pair_at_distance(g, rng, target, kDistanceTolerance * ed);

    OesInstance inst;
    inst.center1 = c1;
    inst.center2 = c2;
    double side = std::sqrt(cfg.cluster_area_pct / 100.0 * bounding_box_area(g));
    inst.window_side = side;

    auto collect = [&](NodeId center) {
        double s = side;
        auto nodes = gen_detail::nodes_in_window(g, g.x[center], g.y[center], s);
        while (nodes.empty()) {
            inst.inflated = true;
            s *= 1.25;
            nodes = gen_detail::nodes_in_window(g, g.x[center], g.y[center], s);
        }
        return nodes;
    };
    auto w1 = collect(c1);
    auto w2 = collect(c2);
    for (int i = 0; i < cfg.q; ++i) {
        NodeId s = rng.pick(w1);
        NodeId d = rng.pick(w2);
        inst.queries.pairs.emplace_back(s, d);
    }
    return inst;
}

inline OrisInstance gen_oris_instance(const Graph& g, const OrisGenConfig& cfg) {
    Rng rng(cfg.seed);
    const double ed = gen_detail::max_euclidean_distance(g);
    const double target = cfg.euclid_distance_pct / 100.0 * ed;
    auto [st, en] = gen_detail::pair_at_distance(g, rng, target, kDistanceTolerance * ed);

    OrisInstance inst;
    inst.st = st;
    inst.en = en;
    double area = cfg.query_space_pct / 100.0 * bounding_box_area(g);
    Ellipse el = ellipse_from_foci_area(g.x[st], g.y[st], g.x[en], g.y[en], area);
    std::vector<NodeId> inside;
    for (NodeId v = 0; v < g.node_count(); ++v)
        if (el.contains(g.x[v], g.y[v])) inside.push_back(v);
    while (inside.empty()) {
        inst.inflated = true;
        el.two_a *= 1.25;
        for (NodeId v = 0; v < g.node_count(); ++v)
            if (el.contains(g.x[v], g.y[v])) inside.push_back(v);
    }
    for (int i = 0; i < cfg.q; ++i) {
        NodeId s = rng.pick(inside);
        NodeId d = rng.pick(inside);
        inst.queries.pairs.emplace_back(s, d);
    }
    if (std::isfinite(cfg.r1_pct)) {
        double spc = dijkstra(g, st).cost[en];
        inst.r1_value = cfg.r1_pct / 100.0 * spc;
    }
    return inst;
}

/// Synthetic road network: a jittered rows x cols street grid with
/// 4-neighbor streets plus a sprinkle of diagonal shortcuts. Costs are
/// integers proportional to the Euclidean length with noise, so path costs
/// stay exactly representable and cross-implementation comparisons can
/// demand bit equality. The footprint aspect matters for benchmarks:
/// elongated footprints model corridor service between far-apart ends.
inline Graph make_road_grid(int rows, int cols, std::uint64_t seed) {
    Rng rng(seed);
    const int n = rows * cols;
    std::vector<double> xs(n), ys(n);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            int id = r * cols + c;
            xs[id] = c + rng.next_real(-0.3, 0.3);
            ys[id] = r + rng.next_real(-0.3, 0.3);
        }
    }
    auto cost = [&](int a, int b) {
        double d = std::hypot(xs[a] - xs[b], ys[a] - ys[b]);
        double noisy = 10.0 * d * (1.0 + 0.4 * rng.next_real());
        return std::max(1.0, std::round(noisy));
    };
    std::vector<std::tuple<NodeId, NodeId, double>> edges;
    auto add_bidir = [&](int a, int b) {
        double c = cost(a, b);
        edges.emplace_back(a, b, c);
        edges.emplace_back(b, a, c);
    };
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            int id = r * cols + c;
            if (c + 1 < cols) add_bidir(id, id + 1);
            if (r + 1 < rows) add_bidir(id, id + cols);
            if (c + 1 < cols && r + 1 < rows && rng.next_real() < 0.15)
                add_bidir(id, id + cols + 1);
        }
    }
    return Graph::from_edge_list(std::move(xs), std::move(ys), edges);
}

/// Square-footprint convenience wrapper.
inline Graph make_road_graph(int approx_nodes, std::uint64_t seed) {
    int side = std::max(2, static_cast<int>(std::lround(std::sqrt(double(approx_nodes)))));
    return make_road_grid(side, side, seed);
}

/// Small random strongly-connected-ish digraph for correctness tests:
/// a random cycle through all nodes plus extra random arcs, integer costs.
inline Graph make_random_digraph(int n, int extra_edges, std::uint64_t seed,
                                 int max_cost = 20) {
    Rng rng(seed);
    std::vector<double> xs(n), ys(n);
    for (int v = 0; v < n; ++v) {
        xs[v] = rng.next_real(0, 100);
        ys[v] = rng.next_real(0, 100);
    }
    std::vector<NodeId> perm(n);
    for (int v = 0; v < n; ++v) perm[v] = v;
    for (int v = n - 1; v > 0; --v) std::swap(perm[v], perm[rng.next_below(v + 1)]);
    std::vector<std::tuple<NodeId, NodeId, double>> edges;
    for (int v = 0; v < n; ++v)
        edges.emplace_back(perm[v], perm[(v + 1) % n],
                           static_cast<double>(rng.next_int(1, max_cost)));
    for (int e = 0; e < extra_edges; ++e) {
        NodeId a = static_cast<NodeId>(rng.next_below(n));
        NodeId b = static_cast<NodeId>(rng.next_below(n));
        if (a == b) continue;
        edges.emplace_back(a, b, static_cast<double>(rng.next_int(1, max_cost)));
    }
    return Graph::from_edge_list(std::move(xs), std::move(ys), edges);
}

}  // namespace roadshare
