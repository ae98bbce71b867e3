#include "doctest.h"
#include "sgm/decompose.hpp"
#include "testutil.hpp"

using namespace sgm;
using sgm::test::edge;

namespace {

QueryGraph path_query(std::vector<std::string> labels) {
  QueryGraph q;
  q.add_vertex("*");
  for (size_t i = 0; i < labels.size(); i++) {
    q.add_vertex("*");
    q.add_edge(static_cast<uint32_t>(i), static_cast<uint32_t>(i + 1),
               labels[i]);
  }
  return q;
}

SelectivityTable table_for(const std::vector<EdgeInput>& stream,
                           const MapConfig& cfg = MapConfig{}) {
  DynamicGraph g = sgm::test::ingest(stream);
  SelectivityTable t = count_edge_types(g, cfg);
  t.merge_paths(count_2edge_paths(g, cfg));
  return t;
}

}  // namespace

TEST_SUITE("decompose") {

TEST_CASE("residual query removal") {
  QueryGraph q = path_query({"a", "b", "c"});
  ResidualQuery r(q);
  CHECK(r.live_edge_count() == 3);
  CHECK(r.vertex_alive(0));
  SUBCASE("remove all edges -> empty query") {
    uint32_t all[] = {0, 1, 2};
    remove_subgraph(r, all);
    CHECK(r.live_edge_count() == 0);
    for (uint32_t v = 0; v < 4; v++) CHECK_FALSE(r.vertex_alive(v));
  }
  SUBCASE("removing the only edge at a leaf vertex removes the vertex") {
    uint32_t first[] = {0};
    remove_subgraph(r, first);
    CHECK_FALSE(r.vertex_alive(0));
    CHECK(r.vertex_alive(1));  // still touched by e1
  }
}

TEST_CASE("find_primitive_instance locates a centered 2-edge path") {
  // Query: a -tcp-> b, c -udp-> b. Key (tcp:out,udp:in) viewed from the
  // arms' shared center b means both arms point *into* b, i.e. the
  // center sees (tcp:in, udp:in).
  QueryGraph q;
  q.add_vertex("*");
  q.add_vertex("*");
  q.add_vertex("*");
  q.add_edge(0, 1, "tcp");
  q.add_edge(2, 1, "udp");
  ResidualQuery r(q);
  MapConfig cfg;
  PrimitiveKey key = PrimitiveKey::path2(Arm{"tcp", Orientation::In},
                                         Arm{"udp", Orientation::In});
  auto inst = find_primitive_instance(r, {}, key, cfg);
  REQUIRE(inst);
  CHECK(inst->edges == std::vector<uint32_t>{0, 1});
  // A key absent from the query yields nothing.
  PrimitiveKey absent = PrimitiveKey::path2(Arm{"tcp", Orientation::Out},
                                            Arm{"udp", Orientation::Out});
  CHECK_FALSE(find_primitive_instance(r, {}, absent, cfg));
  CHECK_FALSE(
      find_primitive_instance(r, {}, PrimitiveKey::edge("icmp"), cfg));
}

TEST_CASE("find_primitive_instance honors the frontier") {
  QueryGraph q = path_query({"a", "a"});
  ResidualQuery r(q);
  MapConfig cfg;
  PrimitiveKey key = PrimitiveKey::edge("a");
  auto free_pick = find_primitive_instance(r, {}, key, cfg);
  REQUIRE(free_pick);
  CHECK(free_pick->edges == std::vector<uint32_t>{0});  // lowest id wins
  auto pinned = find_primitive_instance(r, {2}, key, cfg);
  REQUIRE(pinned);
  CHECK(pinned->edges == std::vector<uint32_t>{1});  // must touch qv2
}

TEST_CASE("primitive set ordering is ascending selectivity") {
  std::vector<EdgeInput> stream;
  for (int i = 0; i < 9; i++)
    stream.push_back(edge(i, "s" + std::to_string(i), "t" + std::to_string(i),
                          "common"));
  stream.push_back(edge(9, "x", "y", "rare"));
  SelectivityTable t = table_for(stream);
  QueryGraph q = path_query({"common", "rare"});
  PrimitiveSet m = make_primitive_set(q, t, Decomposition::Single);
  REQUIRE(m.keys.size() == 2);
  CHECK(m.keys[0] == PrimitiveKey::edge("rare"));
  CHECK(m.keys[1] == PrimitiveKey::edge("common"));
}

TEST_CASE("unseen edge types come first (count 0)") {
  std::vector<EdgeInput> stream = {edge(0, "a", "b", "common")};
  SelectivityTable t = table_for(stream);
  QueryGraph q = path_query({"common", "ghost"});
  PrimitiveSet m = make_primitive_set(q, t, Decomposition::Single);
  REQUIRE(m.keys.size() == 2);
  CHECK(m.keys[0] == PrimitiveKey::edge("ghost"));
}

TEST_CASE("3-edge path decomposes into one 2-edge leaf plus one 1-edge") {
  // Stream making all three labels and their adjacent pairs seen.
  std::vector<EdgeInput> stream = {
      edge(0, "p", "q", "a"), edge(1, "q", "r", "b"), edge(2, "r", "s", "c"),
      edge(3, "u", "v", "a"), edge(4, "v", "w", "b"), edge(5, "w", "x", "c"),
  };
  SelectivityTable t = table_for(stream);
  QueryGraph q = path_query({"a", "b", "c"});
  PrimitiveSet m = make_primitive_set(q, t, Decomposition::Path);
  BuildReport r = decompose_query(q, m, MapConfig{});
  REQUIRE(r.leaf_edges.size() == 2);
  size_t two = r.leaf_edges[0].size() == 2 ? 0 : 1;
  CHECK(r.leaf_edges[two].size() == 2);
  CHECK(r.leaf_edges[1 - two].size() == 1);
  SJTree tree = build_sjtree(q, m, MapConfig{});
  CHECK(tree.leaf_count() == 2);
  CHECK(tree.node_count() == 3);  // 2 leaves + 1 internal
}

TEST_CASE("leaves cover the query edge-disjointly") {
  std::mt19937_64 rng(17);
  auto stream = sgm::test::random_stream(rng, 400, 20,
                                         {"a", "b", "c", "d"}, 1, false);
  SelectivityTable t = table_for(stream);
  std::vector<std::string> alphabet = {"a", "b", "c", "d"};
  for (int trial = 0; trial < 20; trial++) {
    size_t len = 2 + rng() % 4;
    std::vector<std::string> labels;
    for (size_t i = 0; i < len; i++)
      labels.push_back(alphabet[rng() % alphabet.size()]);
    QueryGraph q = path_query(labels);
    for (auto mode : {Decomposition::Single, Decomposition::Path}) {
      PrimitiveSet m = make_primitive_set(q, t, mode);
      BuildReport r = decompose_query(q, m, MapConfig{});
      std::vector<bool> covered(q.edges.size(), false);
      for (const auto& leaf : r.leaf_edges) {
        for (uint32_t e : leaf) {
          CHECK_FALSE(covered[e]);
          covered[e] = true;
        }
      }
      for (bool c : covered) CHECK(c);
      CHECK_NOTHROW(SJTree::from_leaves(q, r.leaf_edges));
    }
  }
}

TEST_CASE("unseen 2-edge combinations fall back to 1-edge leaves") {
  // Only label 'a' edges exist, never adjacent to each other, so the
  // path (a,a) primitive is unseen.
  std::vector<EdgeInput> stream = {edge(0, "p", "q", "a"),
                                   edge(1, "r", "s", "a")};
  SelectivityTable t = table_for(stream);
  QueryGraph q = path_query({"a", "a"});
  PrimitiveSet m = make_primitive_set(q, t, Decomposition::Path);
  BuildReport r = decompose_query(q, m, MapConfig{});
  REQUIRE(r.leaf_edges.size() == 2);
  CHECK(r.leaf_edges[0].size() == 1);
  CHECK(r.leaf_edges[1].size() == 1);
}

TEST_CASE("strategy selection applies the relative threshold") {
  // The a-b junction is a rare 2-edge path: a star of 'b' edges floods
  // the path distribution with (b,b) pairs while 'a' and 'b' singles
  // stay frequent.
  std::vector<EdgeInput> stream;
  int ts = 0;
  for (int i = 0; i < 40; i++)
    stream.push_back(
        edge(ts++, "sa" + std::to_string(i), "ta" + std::to_string(i), "a"));
  for (int i = 0; i < 50; i++)
    stream.push_back(edge(ts++, "hub", "tb" + std::to_string(i), "b"));
  stream.push_back(edge(ts++, "j1", "j2", "a"));
  stream.push_back(edge(ts++, "j2", "j3", "b"));
  SelectivityTable t = table_for(stream);
  QueryGraph q = path_query({"a", "b"});
  StrategyReport low = select_strategy(q, t, 0.5);
  CHECK(low.chosen.decomposition == Decomposition::Path);
  CHECK(low.relative < 0.5);
  CHECK(low.relative > 0.0);
  StrategyReport high = select_strategy(q, t, 1e-9);
  CHECK(high.chosen.decomposition == Decomposition::Single);
  CHECK(low.expected_single == doctest::Approx(high.expected_single));
}

TEST_CASE("unseen edge type forces path strategy with a warning") {
  std::vector<EdgeInput> stream = {edge(0, "a", "b", "x"),
                                   edge(1, "b", "c", "y")};
  SelectivityTable t = table_for(stream);
  QueryGraph q = path_query({"x", "ghost"});
  StrategyReport r = select_strategy(q, t);
  CHECK(r.forced);
  CHECK(r.expected_single == 0.0);
  CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("leaf order report flags violations") {
  std::vector<EdgeInput> stream;
  int ts = 0;
  for (int i = 0; i < 10; i++)
    stream.push_back(
        edge(ts++, "s" + std::to_string(i), "t" + std::to_string(i), "hot"));
  stream.push_back(edge(ts++, "u", "v", "cold"));
  SelectivityTable t = table_for(stream);
  QueryGraph q = path_query({"cold", "hot"});
  SUBCASE("ascending order passes") {
    SJTree good = SJTree::from_leaves(q, {{0}, {1}});
    LeafOrderReport r = leaf_order_check(good, t);
    CHECK(r.ascending);
    CHECK(r.first_leaf_minimal);
    CHECK(r.leaf_frequencies == std::vector<uint64_t>{1, 10});
  }
  SUBCASE("descending order is flagged") {
    SJTree bad = SJTree::from_leaves(q, {{1}, {0}});
    LeafOrderReport r = leaf_order_check(bad, t);
    CHECK_FALSE(r.ascending);
    CHECK_FALSE(r.first_leaf_minimal);
  }
  SUBCASE("single leaf is trivially ordered") {
    QueryGraph q1 = path_query({"hot"});
    SJTree one = SJTree::from_leaves(q1, {{0}});
    LeafOrderReport r = leaf_order_check(one, t);
    CHECK(r.ascending);
  }
}

}  // TEST_SUITE
