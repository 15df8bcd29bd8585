#include <gtest/gtest.h>

#include <random>

#include "bbh/generators.hpp"
#include "bbh/graph.hpp"
#include "bbh/graph_io.hpp"

using namespace bbh;

namespace {

std::vector<int> degrees(const PortGraph& g) {
    std::vector<int> d;
    for (NodeId v = 0; v < g.node_count(); ++v) d.push_back(g.degree(v));
    return d;
}

// Ports form a bijection and edges are symmetric.
void expect_well_formed(const PortGraph& g) {
    for (NodeId v = 0; v < g.node_count(); ++v)
        for (Port p = 1; p <= g.degree(v); ++p) {
            const auto& h = g.follow(v, p);
            ASSERT_GE(h.to, 0);
            const auto& back = g.follow(h.to, h.back);
            EXPECT_EQ(back.to, v);
            EXPECT_EQ(back.back, p);
        }
}

int bfs_distance(const PortGraph& g, NodeId a, NodeId b, const std::vector<NodeId>& allowed) {
    std::vector<int> dist(g.node_count(), -1);
    std::vector<char> ok(g.node_count(), 0);
    for (NodeId v : allowed) ok[v] = 1;
    std::vector<NodeId> q{a};
    dist[a] = 0;
    for (size_t i = 0; i < q.size(); ++i) {
        NodeId v = q[i];
        for (Port p = 1; p <= g.degree(v); ++p) {
            NodeId u = g.follow(v, p).to;
            if (!ok[u] || dist[u] >= 0) continue;
            dist[u] = dist[v] + 1;
            q.push_back(u);
        }
    }
    return dist[b];
}

}  // namespace

TEST(Path, DegreesAndLabels) {
    auto inst = build_path(5, 0, std::nullopt, 6);
    EXPECT_EQ(degrees(inst.graph), (std::vector<int>{1, 2, 2, 2, 1}));
    for (NodeId v = 0; v + 1 < 5; ++v) EXPECT_EQ(inst.graph.follow(v, 1).to, v + 1);
    EXPECT_EQ(inst.graph.follow(4, 1).to, 3);
    expect_well_formed(inst.graph);
}

TEST(Path, InteriorHome) {
    auto inst = build_path(3, 1, std::nullopt, 4);
    EXPECT_EQ(inst.graph.degree(0), 1);
    EXPECT_EQ(inst.graph.degree(2), 1);
    EXPECT_EQ(inst.home, 1);
}

TEST(Path, Errors) {
    EXPECT_THROW(build_path(1, 0, std::nullopt, 1), GraphError);
    EXPECT_THROW(build_path(4, 4, std::nullopt, 1), GraphError);
    EXPECT_THROW(build_path(4, 1, 1, 1), GraphError);
    EXPECT_THROW(build_path(4, 0, 9, 1), GraphError);
    EXPECT_THROW(build_path(4, 0, std::nullopt, 0), GraphError);
}

TEST(Ring, AllDegreeTwo) {
    auto inst = build_ring(6, 0, 3, 4);
    for (NodeId v = 0; v < 6; ++v) EXPECT_EQ(inst.graph.degree(v), 2);
    expect_well_formed(inst.graph);
}

TEST(Tree, StarHasMaxDegreeFour) {
    auto inst = build_tree(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}, 0, 1, 6);
    EXPECT_EQ(inst.graph.max_degree(), 4);
    EXPECT_TRUE(inst.graph.is_tree());
}

TEST(Tree, RejectsDisconnected) {
    EXPECT_THROW(build_tree(4, {{0, 1}, {0, 1}, {2, 3}}, 0, std::nullopt, 1), GraphError);
    EXPECT_THROW(build_tree(4, {{0, 1}}, 0, std::nullopt, 1), GraphError);
}

TEST(PortGraph, RejectsBadLabels) {
    EXPECT_THROW(PortGraph(2, {{0, 2, 1, 1}}), GraphError);
    EXPECT_THROW(PortGraph(3, {{0, 1, 1, 1}, {0, 1, 2, 1}}), GraphError);
    EXPECT_THROW(PortGraph(2, {{0, 1, 0, 2}}), GraphError);
    EXPECT_THROW(PortGraph(3, {{0, 1, 1, 1}}), GraphError);
}

TEST(Random, SeedReproducible) {
    auto a = build_random_bounded(10, 3, 7, 12);
    auto b = build_random_bounded(10, 3, 7, 12);
    EXPECT_EQ(a, b);
    EXPECT_LE(a.graph.max_degree(), 3);
    expect_well_formed(a.graph);
    auto c = build_random_bounded(10, 3, 8, 12);
    EXPECT_FALSE(a == c);
}

TEST(Random, PropertyWellFormedAcrossSeeds) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        int n = 2 + static_cast<int>(seed % 12);
        int d = 2 + static_cast<int>(seed % 3);
        auto inst = build_random_bounded(n, d, seed, 3);
        EXPECT_EQ(inst.graph.node_count(), n);
        EXPECT_LE(inst.graph.max_degree(), d);
        expect_well_formed(inst.graph);
    }
}

TEST(Decompose, PathSplit) {
    auto d = decompose(build_path(5, 0, 2, 3));
    ASSERT_EQ(d.components.size(), 2u);
    EXPECT_EQ(d.components[0], (std::vector<NodeId>{0, 1}));
    EXPECT_EQ(d.components[1], (std::vector<NodeId>{3, 4}));
    EXPECT_EQ(d.component_of(2), -1);
}

TEST(Decompose, RingNotCut) {
    auto d = decompose(build_ring(6, 0, 3, 4));
    ASSERT_EQ(d.components.size(), 1u);
    EXPECT_EQ(d.components[0].size(), 5u);
}

TEST(Decompose, StarCentre) {
    auto d = decompose(build_tree(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}, 1, 0, 6));
    ASSERT_EQ(d.components.size(), 4u);
    EXPECT_EQ(d.components[0], (std::vector<NodeId>{1}));
    for (auto& c : d.components) EXPECT_EQ(c.size(), 1u);
}

TEST(Decompose, NoBbhIsWholeGraph) {
    auto d = decompose(build_path(4, 0, std::nullopt, 1));
    ASSERT_EQ(d.components.size(), 1u);
    EXPECT_EQ(d.components[0].size(), 4u);
}

// Partition property over random graphs: disjoint, covering, and the bbh
// reconnects everything.
TEST(Decompose, PartitionProperty) {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        int n = 3 + static_cast<int>(seed % 9);
        auto inst = build_random_bounded(n, 3, seed, 1);
        NodeId b = 1 + static_cast<NodeId>(seed % (n - 1));
        inst.bbh = b;
        auto d = decompose(inst);
        std::vector<int> count(n, 0);
        for (auto& c : d.components) {
            for (NodeId v : c) ++count[v];
            // internally connected in G - b
            auto r = reachable(inst.graph, c.front(), b);
            EXPECT_EQ(r, c);
        }
        for (NodeId v = 0; v < n; ++v) EXPECT_EQ(count[v], v == b ? 0 : 1);
        EXPECT_EQ(d.component_of(inst.home), 0);
        EXPECT_EQ(static_cast<int>(reachable(inst.graph, 0, -1).size()), n);
    }
}

TEST(LowerBound, FigureExample) {
    LowerBoundLayout lay;
    auto inst = build_lowerbound_family(4, {2, 2, 1}, {Membership::ViaW, Membership::Direct, Membership::ViaW}, 1,
                                        {}, &lay);
    const auto& g = inst.graph;
    EXPECT_EQ(g.max_degree(), 4);
    EXPECT_EQ(inst.home, lay.spine_v[0]);
    EXPECT_EQ(inst.bbh, lay.bbh);
    for (NodeId v : lay.spine_path) EXPECT_EQ(g.degree(v), 4) << "spine node " << v;
    EXPECT_EQ(g.degree(lay.bbh), 4);
    for (auto [i, w] : lay.w) EXPECT_EQ(g.degree(w), 4);
    ASSERT_TRUE(lay.z.has_value());
    std::vector<int> lengths{2, 2, 1};
    for (int i = 0; i < 3; ++i)
        EXPECT_EQ(bfs_distance(g, lay.spine_v[i], lay.spine_v[i + 1], lay.spine_path), lengths[i] + 1);
    EXPECT_NE(g.port_to(lay.spine_v[1], lay.bbh), 0);
    EXPECT_EQ(g.port_to(lay.spine_v[0], lay.bbh), 0);
}

TEST(LowerBound, AllDirect) {
    LowerBoundLayout lay;
    auto inst = build_lowerbound_family(5, {1, 2, 1, 3}, std::vector<Membership>(4, Membership::Direct), 1, {}, &lay);
    EXPECT_EQ(inst.graph.max_degree(), 5);
    for (int i = 0; i < 4; ++i) EXPECT_NE(inst.graph.port_to(lay.spine_v[i], lay.bbh), 0);
    for (NodeId v : lay.spine_path) EXPECT_EQ(inst.graph.degree(v), 5);
    EXPECT_EQ(inst.graph.degree(lay.bbh), 5);
}

TEST(LowerBound, PermutationRelabels) {
    PortPermutation perm{{0, {4, 3, 2, 1}}};
    auto a = build_lowerbound_family(4, {1, 1, 1}, std::vector<Membership>(3, Membership::ViaW), 1);
    auto b = build_lowerbound_family(4, {1, 1, 1}, std::vector<Membership>(3, Membership::ViaW), 1, perm);
    EXPECT_EQ(a.graph.follow(0, 1).to, b.graph.follow(0, 4).to);
    EXPECT_THROW(build_lowerbound_family(4, {1, 1, 1}, std::vector<Membership>(3, Membership::ViaW), 1,
                                         PortPermutation{{0, {1, 1, 2, 3}}}),
                 GraphError);
}

TEST(LowerBound, Errors) {
    EXPECT_THROW(build_lowerbound_family(3, {1, 1}, {Membership::Direct, Membership::Direct}, 1), GraphError);
    EXPECT_THROW(build_lowerbound_family(4, {1, 1, 1}, {}, 1), GraphError);
}

TEST(BhGraph, Counts) {
    for (int delta : {4, 5}) {
        auto inst = build_bh_lowerbound_graph(delta, delta + 2);
        EXPECT_EQ(inst.graph.node_count(), 2 * delta + 1);
        ASSERT_TRUE(inst.bbh);
        EXPECT_EQ(inst.graph.degree(*inst.bbh), delta);
        for (int i = 0; i < delta; ++i) {
            EXPECT_EQ(inst.graph.degree(i), 4);
            EXPECT_EQ(inst.graph.follow(i, 1).to, *inst.bbh);
            EXPECT_EQ(inst.graph.degree(delta + 1 + i), 1);
        }
    }
    EXPECT_THROW(build_bh_lowerbound_graph(3, 5), GraphError);
}

TEST(Trees, NonIsomorphicCounts) {
    // OEIS A000055
    std::vector<size_t> expect{1, 1, 1, 2, 3, 6, 11, 23};
    for (int n = 1; n <= 8; ++n) EXPECT_EQ(nonisomorphic_trees(n).size(), expect[n - 1]) << n;
}

TEST(GraphIo, RoundTripBitExact) {
    std::vector<Instance> all{build_path(6, 2, 4, 6), build_ring(5, 0, std::nullopt, 4),
                              build_random_bounded(9, 3, 11, 12, 5), build_bh_lowerbound_graph(4, 6)};
    for (const auto& inst : all) {
        std::string s = dump_instance(inst);
        auto back = instance_from_json(nlohmann::json::parse(s), inst.k);
        EXPECT_EQ(back, inst);
        EXPECT_EQ(dump_instance(back), s);
    }
}

TEST(GraphIo, SchemaErrors) {
    EXPECT_THROW(instance_from_json(nlohmann::json::parse(R"({"nodes":2})"), 1), GraphError);
    EXPECT_THROW(instance_from_json(nlohmann::json::parse(R"({"nodes":2,"edges":[[0,1,1]],"home":0})"), 1),
                 GraphError);
    EXPECT_THROW(instance_from_json(nlohmann::json::parse(R"({"nodes":2,"edges":[[0,1,1,1]],"home":0,"bbh":0})"), 1),
                 GraphError);
}
