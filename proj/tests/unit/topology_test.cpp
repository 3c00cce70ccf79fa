#include <gtest/gtest.h>

#include "cdnsim/error.hpp"
#include "cdnsim/graphml.hpp"
#include "cdnsim/io.hpp"
#include "cdnsim/topology.hpp"
#include "support.hpp"

using namespace cdnsim;
using namespace testing_support;

namespace {

std::string graphml(const std::string& body, const std::string& keys = "") {
  return "<?xml version=\"1.0\"?>\n<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">" + keys +
         "<graph edgedefault=\"undirected\">" + body + "</graph></graphml>";
}

const std::string kWeightKey =
    "<key id=\"d1\" for=\"edge\" attr.name=\"LinkWeight\" attr.type=\"double\"/>"
    "<key id=\"d2\" for=\"node\" attr.name=\"Priority\" attr.type=\"double\"/>";

}  // namespace

TEST(Graphml, ThreeNodesDefaultWeights) {
  const auto r = parse_graphml(read_file(CDNSIM_TEST_DATA "/three_nodes.graphml"));
  const auto& t = r.topology;
  EXPECT_EQ(t.node_count(), 3u);
  EXPECT_EQ(t.edge_count(), 2u);
  for (const auto& e : t.edges()) EXPECT_DOUBLE_EQ(e.weight, 1.0);
  for (const auto& n : t.nodes()) EXPECT_DOUBLE_EQ(n.priority, 1.0);
  EXPECT_EQ(t.node(t.index_of("B")).label, "Bravo");
  EXPECT_TRUE(r.warnings.empty());
}

TEST(Graphml, ReadsWeightAndPriorityByNameOrId) {
  const std::string doc = graphml(
      "<node id=\"a\"><data key=\"d2\">3</data></node><node id=\"b\"/>"
      "<edge source=\"a\" target=\"b\"><data key=\"d1\">2.5</data></edge>",
      kWeightKey);
  for (const char* key : {"LinkWeight", "d1"}) {
    const auto t = parse_graphml(doc, {key, "Priority"}).topology;
    EXPECT_DOUBLE_EQ(t.edges()[0].weight, 2.5);
    EXPECT_DOUBLE_EQ(t.node(t.index_of("a")).priority, 3.0);
    EXPECT_DOUBLE_EQ(t.node(t.index_of("b")).priority, 1.0);
  }
}

TEST(Graphml, NegativeWeightRejected) {
  const std::string doc = graphml(
      "<node id=\"a\"/><node id=\"b\"/><edge source=\"a\" target=\"b\"><data key=\"d1\">-1</data></edge>",
      kWeightKey);
  try {
    parse_graphml(doc, {"LinkWeight", ""});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidInput);
    EXPECT_NE(std::string(e.what()).find("non-positive"), std::string::npos);
  }
}

TEST(Graphml, MalformedDisconnectedAndDuplicates) {
  EXPECT_THROW(parse_graphml("<graphml><graph><node id="), Error);
  EXPECT_THROW(parse_graphml(graphml("<node id=\"a\"/><node id=\"b\"/>")), Error);
  EXPECT_THROW(parse_graphml(graphml("<node id=\"a\"/><node id=\"a\"/>")), Error);
  EXPECT_THROW(parse_graphml(graphml("<node id=\"a\"/><node id=\"b\"/>"
                                     "<edge source=\"a\" target=\"b\"><data key=\"d1\">x</data></edge>"),
                             {"d1", ""}),
               Error);
}

TEST(Graphml, ParallelEdgesMergedAndSelfLoopsDropped) {
  const std::string doc = graphml(
      "<node id=\"a\"/><node id=\"b\"/>"
      "<edge source=\"a\" target=\"b\"><data key=\"d1\">1</data></edge>"
      "<edge source=\"b\" target=\"a\"><data key=\"d1\">4</data></edge>"
      "<edge source=\"a\" target=\"a\"/>",
      kWeightKey);
  const auto r = parse_graphml(doc, {"LinkWeight", ""});
  ASSERT_EQ(r.topology.edge_count(), 1u);
  EXPECT_DOUBLE_EQ(r.topology.edges()[0].weight, 4.0);
  EXPECT_EQ(r.warnings.size(), 2u);
}

TEST(Topology, ConstructorValidation) {
  EXPECT_THROW(Topology({}, {}), Error);
  EXPECT_THROW(Topology({{"a", "", 1}, {"b", "", 1}}, {{"a", "a", 1}}), Error);
  EXPECT_THROW(Topology({{"a", "", 1}, {"b", "", 1}}, {{"a", "b", 0}}), Error);
  EXPECT_THROW(Topology({{"a", "", 1}, {"b", "", 1}}, {{"a", "b", 1}, {"b", "a", 1}}), Error);
  EXPECT_THROW(Topology({{"a", "", 1}, {"b", "", 1}}, {{"a", "z", 1}}), Error);
  EXPECT_THROW(Topology({{"a", "", 0}, {"b", "", 1}}, {{"a", "b", 1}}), Error);
  EXPECT_NO_THROW(Topology({{"a", "", 1}}, {}));
}

TEST(Topology, NeighborsInIdOrder) {
  const auto t = path_topology(3);
  EXPECT_EQ(t.neighbors("B"), (std::vector<std::string>{"A", "C"}));
  EXPECT_EQ(t.neighbors("A"), (std::vector<std::string>{"B"}));
  EXPECT_THROW(t.neighbors("Q"), Error);

  const Topology star({{"hub", "", 1}, {"e", "", 1}, {"b", "", 1}, {"d", "", 1}, {"a", "", 1}, {"c", "", 1}},
                      {{"hub", "e", 1}, {"hub", "b", 1}, {"hub", "d", 1}, {"hub", "a", 1}, {"hub", "c", 1}});
  EXPECT_EQ(star.neighbors("hub"), (std::vector<std::string>{"a", "b", "c", "d", "e"}));
}

TEST(Distances, PathAndShortcut) {
  const auto t = path_topology(3);
  const auto dm = all_pairs_shortest_paths(t);
  EXPECT_DOUBLE_EQ(dm(t.index_of("A"), t.index_of("C")), 2.0);

  const Topology tri({{"A", "", 1}, {"B", "", 1}, {"C", "", 1}},
                     {{"A", "B", 1}, {"B", "C", 1}, {"A", "C", 3}});
  EXPECT_DOUBLE_EQ(all_pairs_shortest_paths(tri)(0, 2), 2.0);
}

TEST(Distances, MatchFloydWarshallOnRandomGraphs) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const std::size_t n = 2 + seed % 49;
    const auto t = random_topology(seed, n, n / 2);
    const auto dm = all_pairs_shortest_paths(t);
    const auto fw = floyd_warshall(t);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) ASSERT_NEAR(dm(i, j), fw[i][j], 1e-9) << seed;
  }
}

TEST(Distances, MetricProperties) {
  const auto t = random_topology(7, 30, 20);
  const auto dm = all_pairs_shortest_paths(t);
  const std::size_t n = t.node_count();
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_EQ(dm(i, i), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      EXPECT_EQ(dm(i, j), dm(j, i));
      for (std::size_t k = 0; k < n; ++k) EXPECT_LE(dm(i, k), dm(i, j) + dm(j, k) + 1e-9);
    }
  }
}

TEST(Topology, JsonRoundTrip) {
  std::vector<NodeSpec> nodes{{"x", "Ex", 2.5}, {"a", "", 1.0}, {"m", "Em", 0.25}};
  const Topology t(nodes, {{"x", "a", 1.5}, {"m", "a", 3}});
  const auto back = topology_from_json(topology_to_json(t));
  ASSERT_EQ(back.node_count(), t.node_count());
  for (std::size_t i = 0; i < t.node_count(); ++i) {
    EXPECT_EQ(back.node(i).id, t.node(i).id);
    EXPECT_EQ(back.node(i).label, t.node(i).label);
    EXPECT_EQ(back.node(i).priority, t.node(i).priority);
  }
  ASSERT_EQ(back.edge_count(), t.edge_count());
  for (std::size_t i = 0; i < t.edge_count(); ++i) {
    EXPECT_EQ(back.edges()[i].a, t.edges()[i].a);
    EXPECT_EQ(back.edges()[i].b, t.edges()[i].b);
    EXPECT_EQ(back.edges()[i].weight, t.edges()[i].weight);
  }
  EXPECT_EQ(topology_to_json(back), topology_to_json(t));
}
