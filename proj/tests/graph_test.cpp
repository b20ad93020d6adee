#include "roadshare/graph.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <tuple>

#include "roadshare/querygen.hpp"

using namespace roadshare;

namespace {

Graph grid10() {
    // 10x10 unit grid, bidirectional streets, cost 1.
    std::vector<double> xs, ys;
    std::vector<std::tuple<NodeId, NodeId, double>> edges;
    for (int r = 0; r < 10; ++r)
        for (int c = 0; c < 10; ++c) {
            xs.push_back(c);
            ys.push_back(r);
        }
    for (int r = 0; r < 10; ++r)
        for (int c = 0; c < 10; ++c) {
            int id = r * 10 + c;
            if (c + 1 < 10) {
                edges.emplace_back(id, id + 1, 1.0);
                edges.emplace_back(id + 1, id, 1.0);
            }
            if (r + 1 < 10) {
                edges.emplace_back(id, id + 10, 1.0);
                edges.emplace_back(id + 10, id, 1.0);
            }
        }
    return Graph::from_edge_list(xs, ys, edges);
}

TEST(GraphLoad, BidirectionalHeader) {
    std::istringstream in(
        "3 2 1\n"
        "0 0 0\n"
        "1 1 0\n"
        "2 2 0\n"
        "0 1 5.0\n"
        "1 2 7.0\n");
    Graph g = load_graph(in);
    EXPECT_EQ(g.node_count(), 3);
    EXPECT_EQ(g.edge_count(), 4u);
}

TEST(GraphLoad, IsolatedNode) {
    std::istringstream in("1 0 0\n0 3.5 -2\n");
    Graph g = load_graph(in);
    EXPECT_EQ(g.node_count(), 1);
    EXPECT_EQ(g.edge_count(), 0u);
}

TEST(GraphLoad, GridEdgeCount) {
    // 10x10 grid loaded as bidirectional input: 2*(2*10*9) directed edges.
    std::ostringstream file;
    file << "100 180 1\n";
    for (int r = 0; r < 10; ++r)
        for (int c = 0; c < 10; ++c) file << r * 10 + c << ' ' << c << ' ' << r << "\n";
    for (int r = 0; r < 10; ++r)
        for (int c = 0; c < 10; ++c) {
            int id = r * 10 + c;
            if (c + 1 < 10) file << id << ' ' << id + 1 << " 1\n";
            if (r + 1 < 10) file << id << ' ' << id + 10 << " 1\n";
        }
    std::istringstream in(file.str());
    Graph g = load_graph(in);
    EXPECT_EQ(g.node_count(), 100);
    EXPECT_EQ(g.edge_count(), 360u);
}

TEST(GraphLoad, ErrorsCarryLineNumbers) {
    std::istringstream bad_cost("2 1 0\n0 0 0\n1 1 1\n0 1 -3\n");
    try {
        load_graph(bad_cost);
        FAIL() << "expected GraphParseError";
    } catch (const GraphParseError& e) {
        EXPECT_EQ(e.line(), 4u);
    }

    std::istringstream bad_id("2 1 0\n0 0 0\n1 1 1\n0 7 1\n");
    EXPECT_THROW(load_graph(bad_id), GraphParseError);

    std::istringstream bad_line("2 1 0\n0 0 0\n1 1 1\nnonsense\n");
    EXPECT_THROW(load_graph(bad_line), GraphParseError);
}

TEST(GraphLoad, CommentsIgnored) {
    std::istringstream in(
        "# header\n"
        "2 1 0   # inline\n"
        "0 0 0\n"
        "\n"
        "1 1 0\n"
        "0 1 2.5\n");
    Graph g = load_graph(in);
    EXPECT_EQ(g.node_count(), 2);
    EXPECT_EQ(g.out(0)[0].cost, 2.5);
}

TEST(GraphInvariant, OutDegreesSumToM) {
    Graph g = make_road_graph(400, 7);
    std::size_t sum = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) sum += g.out(v).size();
    EXPECT_EQ(sum, g.edge_count());
}

TEST(Transpose, SingleEdge) {
    Graph g = Graph::from_edge_list({0, 1}, {0, 0}, {{0, 1, 3.0}});
    Graph t = transpose(g);
    ASSERT_EQ(t.out(1).size(), 1u);
    EXPECT_EQ(t.out(1)[0].to, 0);
    EXPECT_EQ(t.out(1)[0].cost, 3.0);
    EXPECT_TRUE(t.out(0).empty());
}

std::multiset<std::tuple<NodeId, NodeId, double>> edge_multiset(const Graph& g) {
    std::multiset<std::tuple<NodeId, NodeId, double>> out;
    for (NodeId u = 0; u < g.node_count(); ++u)
        for (const auto& e : g.out(u)) out.insert({u, e.to, e.cost});
    return out;
}

TEST(Transpose, InvolutionAndTotals) {
    Graph g = make_random_digraph(40, 120, 11);
    Graph tt = transpose(transpose(g));
    EXPECT_EQ(edge_multiset(g), edge_multiset(tt));
    Graph t = transpose(g);
    EXPECT_EQ(t.node_count(), g.node_count());
    EXPECT_EQ(t.edge_count(), g.edge_count());
    EXPECT_DOUBLE_EQ(t.total_edge_cost(), g.total_edge_cost());
}

TEST(Transpose, SymmetricGraphFixedPoint) {
    Graph g = grid10();
    EXPECT_EQ(edge_multiset(g), edge_multiset(transpose(g)));
}

TEST(ReduceEllipse, FociAlwaysKept) {
    Graph g = Graph::from_edge_list({0, 10}, {0, 0}, {{0, 1, 1.0}, {1, 0, 1.0}});
    ReducedGraph r = reduce_ellipse(g, 0, 1, 0.001);
    EXPECT_EQ(r.graph.node_count(), 2);
    EXPECT_NE(r.f1, kNoNode);
    EXPECT_NE(r.f2, kNoNode);
    EXPECT_FALSE(r.disconnected);
}

TEST(ReduceEllipse, FullCoverOnDiagonalLayout) {
    // Nodes on the focal segment have distance sum exactly 2c <= 2a, so a
    // full-area ellipse with foci at the layout's corners keeps everything.
    std::vector<double> xs, ys;
    std::vector<std::tuple<NodeId, NodeId, double>> edges;
    for (int i = 0; i < 8; ++i) {
        xs.push_back(i);
        ys.push_back(i);
        if (i) {
            edges.emplace_back(i - 1, i, 1.0);
            edges.emplace_back(i, i - 1, 1.0);
        }
    }
    Graph g = Graph::from_edge_list(xs, ys, edges);
    ReducedGraph r = reduce_ellipse(g, 0, 7, 1.0);
    EXPECT_EQ(r.graph.node_count(), 8);
}

TEST(ReduceEllipse, MatchesBruteForceFilter) {
    Graph g = grid10();
    NodeId f1 = 0, f2 = 99;
    double fraction = 0.5;
    ReducedGraph r = reduce_ellipse(g, f1, f2, fraction);

    Ellipse el = ellipse_from_foci_area(g.x[f1], g.y[f1], g.x[f2], g.y[f2],
                                        fraction * bounding_box_area(g));
    std::vector<NodeId> expect;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (v == f1 || v == f2 || el.contains(g.x[v], g.y[v])) expect.push_back(v);
    }
    EXPECT_EQ(r.old_ids, expect);
    EXPECT_LT(r.graph.node_count(), g.node_count());
    EXPECT_GT(r.graph.node_count(), 2);
    EXPECT_EQ(r.old_ids[r.f1], f1);
    EXPECT_EQ(r.old_ids[r.f2], f2);
}

TEST(ReduceEllipse, DisconnectionFlag) {
    // Two clusters joined only through a node outside any small ellipse.
    std::vector<double> xs{0, 1, 50, 100, 99};
    std::vector<double> ys{0, 40, 90, 0, 40};
    std::vector<std::tuple<NodeId, NodeId, double>> edges{
        {0, 1, 1}, {1, 0, 1}, {1, 2, 1}, {2, 1, 1}, {2, 4, 1}, {4, 2, 1}, {4, 3, 1}, {3, 4, 1}};
    Graph g = Graph::from_edge_list(xs, ys, edges);
    ReducedGraph r = reduce_ellipse(g, 0, 3, 0.02);
    EXPECT_TRUE(r.disconnected);
}

TEST(EllipseGeometry, AreaMatchesRequest) {
    Ellipse el = ellipse_from_foci_area(0, 0, 6, 0, 40.0);
    double a = el.two_a / 2;
    double c = 3.0;
    double b = std::sqrt(a * a - c * c);
    EXPECT_NEAR(M_PI * a * b, 40.0, 1e-9);
}

TEST(GraphIO, SaveLoadRoundTrip) {
    Graph g = make_random_digraph(25, 60, 3);
    std::ostringstream out;
    save_graph(g, out);
    std::istringstream in(out.str());
    Graph g2 = load_graph(in);
    EXPECT_EQ(edge_multiset(g), edge_multiset(g2));
    EXPECT_EQ(g.x, g2.x);
    EXPECT_EQ(g.y, g2.y);
}

}  // namespace
