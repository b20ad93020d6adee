#pragma once

#include <cmath>
#include <fstream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "roadshare/common.hpp"

namespace roadshare {

/// Raised by load_graph on a malformed input file; carries the 1-based
/// line number of the offending record.
class GraphParseError : public std::runtime_error {
  public:
    GraphParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what),
          line_(line) {}
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

/// Directed weighted road network in CSR form with planar node coordinates.
/// Immutable after construction; safe to share across concurrent solver runs.
struct Graph {
    struct Edge {
        NodeId to;
        double cost;
    };

    std::vector<double> x, y;            ///< per-node coordinates
    std::vector<std::uint32_t> offsets;  ///< size n+1, CSR row starts
    std::vector<Edge> edges;             ///< outgoing edges, grouped by source

    NodeId node_count() const { return static_cast<NodeId>(x.size()); }
    std::size_t edge_count() const { return edges.size(); }

    std::span<const Edge> out(NodeId u) const {
        return {edges.data() + offsets[u], edges.data() + offsets[u + 1]};
    }

    /// Source node of edge index e (CSR rows are sorted, so binary search).
    NodeId edge_source(std::size_t e) const {
        NodeId lo = 0, hi = node_count() - 1;
        while (lo < hi) {
            NodeId mid = (lo + hi + 1) / 2;
            if (offsets[mid] <= e) lo = mid; else hi = mid - 1;
        }
        return lo;
    }

    double total_edge_cost() const {
        double s = 0;
        for (const Edge& e : edges) s += e.cost;
        return s;
    }

    /// Builds the CSR from an unsorted (from, to, cost) triple list.
    static Graph from_edge_list(std::vector<double> xs, std::vector<double> ys,
                                const std::vector<std::tuple<NodeId, NodeId, double>>& list) {
        Graph g;
        g.x = std::move(xs);
        g.y = std::move(ys);
        const std::size_t n = g.x.size();
        g.offsets.assign(n + 1, 0);
        for (const auto& [u, v, c] : list) {
            (void)v; (void)c;
            ++g.offsets[u + 1];
        }
        for (std::size_t i = 1; i <= n; ++i) g.offsets[i] += g.offsets[i - 1];
        g.edges.resize(list.size());
        std::vector<std::uint32_t> fill(g.offsets.begin(), g.offsets.end() - 1);
        for (const auto& [u, v, c] : list) {
            g.edges[fill[u]++] = {v, c};
        }
        return g;
    }
};

/// Reversed-edge view of g: has (v,u,c) iff g has (u,v,c). Node table and
/// coordinates are copied unchanged.
inline Graph transpose(const Graph& g) {
    std::vector<std::tuple<NodeId, NodeId, double>> rev;
    rev.reserve(g.edge_count());
    for (NodeId u = 0; u < g.node_count(); ++u) {
        for (const auto& e : g.out(u)) rev.emplace_back(e.to, u, e.cost);
    }
    return Graph::from_edge_list(g.x, g.y, rev);
}

/// Text format:
///   <n> <m_input> <bidirectional:0|1>
///   <node-id> <x> <y>        n lines
///   <from> <to> <cost>       m_input lines
/// `#` starts a comment; blank lines are skipped. With the bidirectional
/// flag set, each input edge becomes two directed edges of equal cost.
inline Graph load_graph(std::istream& in) {
    std::size_t lineno = 0;
    auto next_record = [&](std::string& out) -> bool {
        std::string line;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::size_t i = line.find_first_not_of(" \t\r");
            if (i == std::string::npos) continue;
            out = line;
            return true;
        }
        return false;
    };

    std::string rec;
    if (!next_record(rec)) throw GraphParseError(lineno, "missing header");
    std::int64_t n, m;
    int bidir;
    {
        std::istringstream ss(rec);
        if (!(ss >> n >> m >> bidir) || n < 0 || m < 0 || (bidir != 0 && bidir != 1))
            throw GraphParseError(lineno, "bad header: expected '<n> <m> <0|1>'");
    }

    std::vector<double> xs(n), ys(n);
    std::vector<bool> seen(n, false);
    for (std::int64_t i = 0; i < n; ++i) {
        if (!next_record(rec)) throw GraphParseError(lineno, "unexpected end of node section");
        std::istringstream ss(rec);
        std::int64_t id;
        double cx, cy;
        if (!(ss >> id >> cx >> cy)) throw GraphParseError(lineno, "bad node record");
        if (id < 0 || id >= n) throw GraphParseError(lineno, "node id out of range");
        if (seen[id]) throw GraphParseError(lineno, "duplicate node id");
        seen[id] = true;
        xs[id] = cx;
        ys[id] = cy;
    }

    std::vector<std::tuple<NodeId, NodeId, double>> list;
    list.reserve(bidir ? 2 * m : m);
    for (std::int64_t i = 0; i < m; ++i) {
        if (!next_record(rec)) throw GraphParseError(lineno, "unexpected end of edge section");
        std::istringstream ss(rec);
        std::int64_t u, v;
        double c;
        if (!(ss >> u >> v >> c)) throw GraphParseError(lineno, "bad edge record");
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw GraphParseError(lineno, "edge endpoint out of range");
        if (!(c >= 0)) throw GraphParseError(lineno, "negative edge cost");
        list.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v), c);
        if (bidir) list.emplace_back(static_cast<NodeId>(v), static_cast<NodeId>(u), c);
    }

    return Graph::from_edge_list(std::move(xs), std::move(ys), list);
}

inline Graph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    return load_graph(in);
}

inline void save_graph(const Graph& g, std::ostream& out) {
    out.precision(17);  // doubles survive the round trip
    out << g.node_count() << ' ' << g.edge_count() << " 0\n";
    for (NodeId v = 0; v < g.node_count(); ++v)
        out << v << ' ' << g.x[v] << ' ' << g.y[v] << '\n';
    for (NodeId u = 0; u < g.node_count(); ++u)
        for (const auto& e : g.out(u)) out << u << ' ' << e.to << ' ' << e.cost << '\n';
}

/// Ellipse given by its two foci and the major-axis length 2a.
struct Ellipse {
    double fx1, fy1, fx2, fy2;
    double two_a;

    bool contains(double px, double py) const {
        double d1 = std::hypot(px - fx1, py - fy1);
        double d2 = std::hypot(px - fx2, py - fy2);
        return d1 + d2 <= two_a * (1 + 1e-12) + 1e-12;
    }
};

/// Ellipse through the given foci whose area equals `area`. Solving
/// pi*a*b = area with b^2 = a^2 - c^2 gives a^2 as the positive root of
/// a quartic in a; the result always has a >= c, so both foci lie inside.
inline Ellipse ellipse_from_foci_area(double fx1, double fy1, double fx2, double fy2,
                                      double area) {
    const double c = std::hypot(fx2 - fx1, fy2 - fy1) / 2.0;
    const double k = area / M_PI;
    double a2 = (c * c + std::sqrt(c * c * c * c + 4.0 * k * k)) / 2.0;
    double a = std::sqrt(a2);
    if (a < c) a = c;  // guards rounding when area ~ 0
    return Ellipse{fx1, fy1, fx2, fy2, 2.0 * a};
}

/// Bounding-box area of the node coordinates (the "total area" proxy used
/// by both the ellipse reduction and the instance generators).
inline double bounding_box_area(const Graph& g) {
    if (g.node_count() == 0) return 0;
    double xmin = g.x[0], xmax = g.x[0], ymin = g.y[0], ymax = g.y[0];
    for (NodeId v = 1; v < g.node_count(); ++v) {
        xmin = std::min(xmin, g.x[v]);
        xmax = std::max(xmax, g.x[v]);
        ymin = std::min(ymin, g.y[v]);
        ymax = std::max(ymax, g.y[v]);
    }
    return (xmax - xmin) * (ymax - ymin);
}

/// Induced sub-graph of an elliptical window, used to shrink the working
/// graph before running the solvers.
struct ReducedGraph {
    Graph graph;
    std::vector<NodeId> old_ids;  ///< new id -> original id
    NodeId f1 = kNoNode;          ///< remapped ids of the foci
    NodeId f2 = kNoNode;
    bool disconnected = false;    ///< f2 unreachable from f1 in the cut
};

namespace detail {

inline bool reachable(const Graph& g, NodeId from, NodeId to) {
    std::vector<bool> vis(g.node_count(), false);
    std::vector<NodeId> stack{from};
    vis[from] = true;
    while (!stack.empty()) {
        NodeId u = stack.back();
        stack.pop_back();
        if (u == to) return true;
        for (const auto& e : g.out(u))
            if (!vis[e.to]) {
                vis[e.to] = true;
                stack.push_back(e.to);
            }
    }
    return false;
}

}  // namespace detail

/// Keeps the nodes inside the ellipse with foci at f1/f2 whose area is
/// `area_fraction` of the graph's bounding-box area. The two foci are always
/// retained. Node ids are remapped densely; old_ids maps them back.
/// If the cut disconnects f1 from f2 the result is still returned with the
/// `disconnected` flag set (solvers treat the missing paths as infinite).
inline ReducedGraph reduce_ellipse(const Graph& g, NodeId f1, NodeId f2,
                                   double area_fraction) {
    Ellipse el = ellipse_from_foci_area(g.x[f1], g.y[f1], g.x[f2], g.y[f2],
                                        area_fraction * bounding_box_area(g));
    ReducedGraph r;
    std::vector<NodeId> remap(g.node_count(), kNoNode);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (v == f1 || v == f2 || el.contains(g.x[v], g.y[v])) {
            remap[v] = static_cast<NodeId>(r.old_ids.size());
            r.old_ids.push_back(v);
        }
    }
    std::vector<double> xs, ys;
    xs.reserve(r.old_ids.size());
    ys.reserve(r.old_ids.size());
    for (NodeId old : r.old_ids) {
        xs.push_back(g.x[old]);
        ys.push_back(g.y[old]);
    }
    std::vector<std::tuple<NodeId, NodeId, double>> list;
    for (NodeId old : r.old_ids) {
        for (const auto& e : g.out(old)) {
            if (remap[e.to] != kNoNode)
                list.emplace_back(remap[old], remap[e.to], e.cost);
        }
    }
    r.graph = Graph::from_edge_list(std::move(xs), std::move(ys), list);
    r.f1 = remap[f1];
    r.f2 = remap[f2];
    r.disconnected = !detail::reachable(r.graph, r.f1, r.f2);
    return r;
}

}  // namespace roadshare
