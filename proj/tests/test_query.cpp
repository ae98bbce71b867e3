#include "doctest.h"
#include "sgm/query.hpp"
#include "testutil.hpp"

using namespace sgm;
using sgm::test::edge;

namespace {

QueryGraph path2_query() {
  // qv0 -tcp-> qv1 -udp-> qv2
  QueryGraph q;
  q.add_vertex("*");
  q.add_vertex("*");
  q.add_vertex("*");
  q.add_edge(0, 1, "tcp");
  q.add_edge(1, 2, "udp");
  return q;
}

}  // namespace

TEST_SUITE("query") {

TEST_CASE("bind_edge records pair, endpoints and span") {
  DynamicGraph g;
  EdgeId id = g.add_edge(edge(7, "a", "b", "tcp"));
  QueryGraph q = path2_query();
  Match m = make_single_edge_match(0, q.edges[0], *g.edge(id));
  CHECK(m.pairs.size() == 1);
  CHECK(m.pairs[0] == std::pair<uint32_t, EdgeId>{0, id});
  CHECK(m.earliest == 7);
  CHECK(m.latest == 7);
  CHECK(m.image(0) == g.find_vertex("a"));
  CHECK(m.image(1) == g.find_vertex("b"));
  CHECK_FALSE(m.image(2));
}

TEST_CASE("bind_vertex rejects conflicting and non-injective bindings") {
  Match m;
  CHECK(m.bind_vertex(0, 5));
  CHECK(m.bind_vertex(0, 5));        // idempotent
  CHECK_FALSE(m.bind_vertex(0, 6));  // conflict
  CHECK_FALSE(m.bind_vertex(1, 5));  // injectivity
  CHECK(m.bind_vertex(1, 9));
}

TEST_CASE("join_matches merges compatible sibling matches") {
  DynamicGraph g;
  EdgeId e1 = g.add_edge(edge(1, "a", "b", "tcp"));
  EdgeId e2 = g.add_edge(edge(4, "b", "c", "udp"));
  QueryGraph q = path2_query();
  Match m1 = make_single_edge_match(0, q.edges[0], *g.edge(e1));
  Match m2 = make_single_edge_match(1, q.edges[1], *g.edge(e2));
  auto joined = join_matches(m1, m2);
  REQUIRE(joined);
  CHECK(joined->pairs.size() == 2);
  CHECK(joined->earliest == 1);
  CHECK(joined->latest == 4);
  CHECK(joined->image(0) == g.find_vertex("a"));
  CHECK(joined->image(1) == g.find_vertex("b"));
  CHECK(joined->image(2) == g.find_vertex("c"));
}

TEST_CASE("join_matches fails on vertex map disagreement") {
  DynamicGraph g;
  EdgeId e1 = g.add_edge(edge(1, "a", "b", "tcp"));
  EdgeId e2 = g.add_edge(edge(2, "x", "c", "udp"));  // qv1 -> x, not b
  QueryGraph q = path2_query();
  Match m1 = make_single_edge_match(0, q.edges[0], *g.edge(e1));
  Match m2 = make_single_edge_match(1, q.edges[1], *g.edge(e2));
  CHECK_FALSE(join_matches(m1, m2));
}

TEST_CASE("join_matches fails when injectivity would break") {
  // Query: qv0->qv1 (x), qv2->qv3 (y); disjoint vertex sets, so the maps
  // never disagree, but both data edges reuse vertex a.
  QueryGraph q;
  for (int i = 0; i < 4; i++) q.add_vertex("*");
  q.add_edge(0, 1, "x");
  q.add_edge(2, 3, "y");
  DynamicGraph g;
  EdgeId e1 = g.add_edge(edge(1, "a", "b", "x"));
  EdgeId e2 = g.add_edge(edge(2, "a", "c", "y"));
  Match m1 = make_single_edge_match(0, q.edges[0], *g.edge(e1));
  Match m2 = make_single_edge_match(1, q.edges[1], *g.edge(e2));
  CHECK_FALSE(join_matches(m1, m2));
}

TEST_CASE("join_matches fails when one data edge plays two query roles") {
  QueryGraph q;
  q.add_vertex("*");
  q.add_vertex("*");
  q.add_edge(0, 1, "x");
  q.add_edge(0, 1, "x");  // parallel query edges
  DynamicGraph g;
  EdgeId e1 = g.add_edge(edge(1, "a", "b", "x"));
  Match m1 = make_single_edge_match(0, q.edges[0], *g.edge(e1));
  Match m2 = make_single_edge_match(1, q.edges[1], *g.edge(e1));
  CHECK_FALSE(join_matches(m1, m2));
}

TEST_CASE("project extracts cut images in query-vertex order") {
  Match m;
  m.bind_vertex(1, 2);
  m.bind_vertex(2, 7);
  m.bind_vertex(3, 5);
  SUBCASE("single cut vertex: qv2 -> dv7 gives key (7)") {
    CutSubgraph cut{{2}, {}};
    CHECK(project(m, cut) == JoinKey{7});
  }
  SUBCASE("cut (qv1,qv3) -> (dv2,dv5) gives key (2,5)") {
    CutSubgraph cut{{1, 3}, {}};
    CHECK(project(m, cut) == JoinKey{2, 5});
  }
}

TEST_CASE("match_span") {
  DynamicGraph g;
  EdgeId e1 = g.add_edge(edge(3, "a", "b", "x"));
  EdgeId e2 = g.add_edge(edge(9, "b", "c", "x"));
  QueryGraph q = path2_query();
  Match single = make_single_edge_match(0, q.edges[0], *g.edge(e1));
  CHECK(match_span(single) == 0);
  QueryGraph qx;
  qx.add_vertex("*");
  qx.add_vertex("*");
  qx.add_vertex("*");
  qx.add_edge(0, 1, "x");
  qx.add_edge(1, 2, "x");
  Match m2 = make_single_edge_match(1, qx.edges[1], *g.edge(e2));
  Match m1 = make_single_edge_match(0, qx.edges[0], *g.edge(e1));
  auto joined = join_matches(m1, m2);
  REQUIRE(joined);
  CHECK(match_span(*joined) == 6);
  Match empty;
  CHECK_THROWS_AS(match_span(empty), std::logic_error);
}

TEST_CASE("canonical signature is insertion-order independent") {
  DynamicGraph g;
  EdgeId e1 = g.add_edge(edge(1, "a", "b", "tcp"));
  EdgeId e2 = g.add_edge(edge(2, "b", "c", "udp"));
  QueryGraph q = path2_query();
  Match m1 = make_single_edge_match(0, q.edges[0], *g.edge(e1));
  Match m2 = make_single_edge_match(1, q.edges[1], *g.edge(e2));
  auto ab = join_matches(m1, m2);
  auto ba = join_matches(m2, m1);
  REQUIRE(ab);
  REQUIRE(ba);
  CHECK(canonical_signature(*ab) == canonical_signature(*ba));
  CHECK(MatchSignatureHash{}(canonical_signature(*ab)) ==
        MatchSignatureHash{}(canonical_signature(*ba)));
}

TEST_CASE("signatures differing in one data edge are unequal") {
  DynamicGraph g;
  EdgeId e1 = g.add_edge(edge(1, "a", "b", "tcp"));
  EdgeId e2 = g.add_edge(edge(2, "a", "b", "tcp"));
  QueryGraph q = path2_query();
  Match m1 = make_single_edge_match(0, q.edges[0], *g.edge(e1));
  Match m2 = make_single_edge_match(0, q.edges[0], *g.edge(e2));
  CHECK(canonical_signature(m1) != canonical_signature(m2));
}

TEST_CASE("empty match has empty signature") {
  Match m;
  CHECK(canonical_signature(m).empty());
}

TEST_CASE("connected() detects disconnected queries") {
  QueryGraph q;
  for (int i = 0; i < 4; i++) q.add_vertex("*");
  q.add_edge(0, 1, "x");
  CHECK_FALSE(q.connected());  // vertices 2,3 unreachable
  q.add_edge(1, 2, "x");
  q.add_edge(3, 2, "x");
  CHECK(q.connected());
}

}  // TEST_SUITE
