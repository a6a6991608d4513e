#include <gtest/gtest.h>

#include "ecoroute/error.hpp"
#include "ecoroute/routing.hpp"

namespace ecoroute {
namespace {

// Builds graphs with named nodes; data centers get a terminal "<name>*".
struct GraphBuilder {
  std::vector<Node> nodes;
  std::vector<Edge> edges;

  NodeId node(const std::string& name, bool terminal = false) {
    for (NodeId i = 0; i < nodes.size(); ++i) {
      if (nodes[i].name == name) return i;
    }
    nodes.push_back(Node{name, std::nullopt, std::nullopt, terminal});
    return nodes.size() - 1;
  }
  EdgeId link(const std::string& u, const std::string& v, double km) {
    edges.push_back(Edge{u + "-" + v, node(u), node(v), km, EdgeKind::fiber});
    return edges.size() - 1;
  }
  EdgeId dc(const std::string& d) {
    edges.push_back(Edge{d + "-dc", node(d), node(d + "*", true), 0.0, EdgeKind::virtual_dc});
    return edges.size() - 1;
  }
  NetworkGraph build() const { return NetworkGraph(nodes, edges); }
};

// s joined directly to d1 (100 km), d2 (50 km), d3 (200 km).
struct Star {
  GraphBuilder b;
  NetworkGraph g;
  Commodity c;
  Star() {
    b.link("s", "d1", 100);
    b.link("s", "d2", 50);
    b.link("s", "d3", 200);
    for (auto d : {"d1", "d2", "d3"}) b.dc(d);
    g = b.build();
    c = Commodity{b.node("s"), {b.node("d1"), b.node("d2"), b.node("d3")}, 1.0};
  }
};

TEST(RoutingMode, LabelsRoundTrip) {
  for (const auto& mode : {RoutingMode::single(), RoutingMode::k_shortest(4),
                           RoutingMode::m_closest(5), RoutingMode::mixed(4, 5)}) {
    EXPECT_EQ(RoutingMode::parse(mode.label()), mode) << mode.label();
  }
  EXPECT_EQ(RoutingMode::mixed(4, 5).label(), "mixed:4x5");
}

TEST(RoutingMode, ParseRejectsGarbage) {
  for (const char* bad : {"", "single:2", "k-shortest", "k-shortest:0", "k-shortest:2x",
                          "m-closest:-1", "mixed:4", "mixed:4x", "mixed:x5", "dijkstra"}) {
    EXPECT_THROW(RoutingMode::parse(bad), ValidationError) << bad;
  }
}

TEST(EnumeratePaths, SingleShortestPicksNearestDataCenter) {
  Star star;
  const auto paths = enumerate_paths(star.g, star.c, 0, RoutingMode::single());
  ASSERT_EQ(paths.size(), 1u);
  // Ties on hop count are broken by length: d2 at 50 km.
  EXPECT_EQ(paths[0].edges, (std::vector<EdgeId>{1, 4}));
  EXPECT_EQ(path_destination(paths[0], star.g), star.b.node("d2"));
}

TEST(EnumeratePaths, ClosestDestinationsInOrder) {
  Star star;
  const auto paths = enumerate_paths(star.g, star.c, 0, RoutingMode::m_closest(3));
  ASSERT_EQ(paths.size(), 3u);
  EXPECT_EQ(path_destination(paths[0], star.g), star.b.node("d2"));
  EXPECT_EQ(path_destination(paths[1], star.g), star.b.node("d1"));
  EXPECT_EQ(path_destination(paths[2], star.g), star.b.node("d3"));
}

TEST(EnumeratePaths, AskingForMoreDestinationsThanExistIsFine) {
  Star star;
  EXPECT_EQ(enumerate_paths(star.g, star.c, 0, RoutingMode::m_closest(10)).size(), 3u);
}

TEST(EnumeratePaths, KShortestReturnsWhatTheGraphHas) {
  // Square s-a-d, s-b-d: only two loop-free routes to d.
  GraphBuilder b;
  b.link("s", "a", 10);
  b.link("a", "d", 10);
  b.link("s", "b", 10);
  b.link("b", "d", 30);
  b.dc("d");
  const auto g = b.build();
  const Commodity c{b.node("s"), {b.node("d")}, 1.0};
  const auto paths = enumerate_paths(g, c, 0, RoutingMode::k_shortest(3));
  ASSERT_EQ(paths.size(), 2u);
  EXPECT_EQ(paths[0].edges, (std::vector<EdgeId>{0, 1, 4}));
  EXPECT_EQ(paths[1].edges, (std::vector<EdgeId>{2, 3, 4}));
  for (const auto& p : paths) EXPECT_NO_THROW(validate_path(p, c, g, "k"));
}

TEST(EnumeratePaths, MixedIsBoundedByKTimesM) {
  // Ladder with many alternative routes to four data centers.
  GraphBuilder b;
  for (int i = 0; i < 5; ++i) {
    const auto top = "t" + std::to_string(i);
    const auto bot = "u" + std::to_string(i);
    b.link(top, bot, 10 + i);
    if (i > 0) {
      b.link("t" + std::to_string(i - 1), top, 20);
      b.link("u" + std::to_string(i - 1), bot, 25);
    }
  }
  for (auto d : {"t2", "u3", "t4", "u4"}) b.dc(d);
  const auto g = b.build();
  const Commodity c{b.node("t0"), {b.node("t2"), b.node("u3"), b.node("t4"), b.node("u4")}, 1.0};
  const auto paths = enumerate_paths(g, c, 7, RoutingMode::mixed(5, 4));
  EXPECT_LE(paths.size(), 20u);
  EXPECT_GT(paths.size(), 4u);
  for (const auto& p : paths) {
    EXPECT_EQ(p.commodity, 7u);
    EXPECT_NO_THROW(validate_path(p, c, g, "mixed"));
  }
}

TEST(EnumeratePaths, UnreachableDestinationThrows) {
  GraphBuilder b;
  b.link("s", "a", 10);
  b.node("d");
  b.dc("d");
  const auto g = b.build();
  EXPECT_THROW(enumerate_paths(g, Commodity{b.node("s"), {b.node("d")}, 1.0}, 0,
                               RoutingMode::single()),
               ValidationError);
}

TEST(EnumeratePaths, Deterministic) {
  Star star;
  const auto a = enumerate_paths(star.g, star.c, 0, RoutingMode::mixed(2, 3));
  const auto b = enumerate_paths(star.g, star.c, 0, RoutingMode::mixed(2, 3));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].edges, b[i].edges);
}

TEST(ValidatePath, RejectsWrongEndpoints) {
  Star star;
  // Ends at d1's fiber link without the virtual-dc edge.
  EXPECT_THROW(validate_path(Path{0, {0}}, star.c, star.g, "x"), ValidationError);
  // Virtual edge of a data center the path never reaches.
  EXPECT_THROW(validate_path(Path{0, {0, 4}}, star.c, star.g, "x"), ValidationError);
  EXPECT_NO_THROW(validate_path(Path{0, {0, 3}}, star.c, star.g, "x"));
}

}  // namespace
}  // namespace ecoroute
