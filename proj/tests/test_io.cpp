#include <sstream>

#include "doctest.h"
#include "sgm/io.hpp"
#include "testutil.hpp"

using namespace sgm;
using sgm::test::edge;

TEST_SUITE("io") {

TEST_CASE("stream TSV round-trip with comments and attributes") {
  std::string text =
      "# flow capture\n"
      "10\th1\thost\ttcp\th2\thost\n"
      "20\th2\thost\tudp\th3\tserver\tport=53;proto=dns\n";
  std::istringstream is(text);
  auto edges = read_stream(is);
  REQUIRE(edges.size() == 2);
  CHECK(edges[0].timestamp == 10);
  CHECK(edges[0].src == "h1");
  CHECK(edges[0].label == "tcp");
  CHECK(edges[0].dst_label == "host");
  REQUIRE(edges[1].attributes.size() == 2);
  CHECK(edges[1].attributes[0] == std::pair<std::string, std::string>{
                                      "port", "53"});
  std::ostringstream os;
  write_stream(os, edges);
  std::istringstream back(os.str());
  auto again = read_stream(back);
  REQUIRE(again.size() == 2);
  CHECK(again[1].attributes == edges[1].attributes);
  CHECK(again[0].timestamp == edges[0].timestamp);
}

TEST_CASE("stream parse errors") {
  SUBCASE("negative timestamp") {
    std::istringstream is("-5\ta\tv\tx\tb\tv\n");
    CHECK_THROWS_AS(read_stream(is), ParseError);
  }
  SUBCASE("too few fields") {
    std::istringstream is("5\ta\tv\tx\n");
    CHECK_THROWS_AS(read_stream(is), ParseError);
  }
  SUBCASE("non-numeric timestamp") {
    std::istringstream is("soon\ta\tv\tx\tb\tv\n");
    CHECK_THROWS_AS(read_stream(is), ParseError);
  }
}

TEST_CASE("query file round-trip with window and wildcards") {
  std::string text =
      "@window 500\n"
      "0\tu0\t*\ttcp\tu1\t*\n"
      "0\tu1\t*\t*\tu2\thost\n";
  std::istringstream is(text);
  QueryFile qf = read_query(is);
  CHECK(qf.window == 500);
  REQUIRE(qf.query.edges.size() == 2);
  CHECK(qf.query.vertices.size() == 3);
  CHECK(qf.query.edges[0].label == "tcp");
  CHECK(qf.query.edges[1].label == "*");
  CHECK(qf.query.vertices[qf.query.edges[1].dst].label == "host");
  // Shared vertex name u1 was interned once.
  CHECK(qf.query.edges[0].dst == qf.query.edges[1].src);
  std::ostringstream os;
  write_query(os, qf.query, qf.window);
  std::istringstream back(os.str());
  QueryFile qf2 = read_query(back);
  CHECK(qf2.window == qf.window);
  CHECK(qf2.query.edges.size() == qf.query.edges.size());
  CHECK(qf2.query.vertices.size() == qf.query.vertices.size());
}

TEST_CASE("query without window defaults to unbounded") {
  std::istringstream is("0\ta\t*\tx\tb\t*\n");
  QueryFile qf = read_query(is);
  CHECK(qf.window == kNoWindow);
}

TEST_CASE("disconnected query is rejected") {
  std::istringstream is(
      "0\ta\t*\tx\tb\t*\n"
      "0\tc\t*\ty\td\t*\n");
  CHECK_THROWS_AS(read_query(is), ParseError);
}

TEST_CASE("stats CSV round-trip preserves counts and totals") {
  DynamicGraph g;
  g.add_edge(edge(0, "v", "a", "tcp"));
  g.add_edge(edge(1, "v", "b", "tcp"));
  g.add_edge(edge(2, "c", "v", "udp"));
  SelectivityTable t = count_edge_types(g, MapConfig{});
  t.merge_paths(count_2edge_paths(g, MapConfig{}));
  t.snapshot_ts = 2;
  t.edges_sampled = 3;
  std::ostringstream os;
  write_stats(os, t);
  std::istringstream is(os.str());
  SelectivityTable back = read_stats(is);
  CHECK(back.counts == t.counts);
  CHECK(back.total_edges == t.total_edges);
  CHECK(back.total_paths == t.total_paths);
  CHECK(back.snapshot_ts == t.snapshot_ts);
  CHECK(back.edges_sampled == t.edges_sampled);
}

TEST_CASE("stats rows are ordered by ascending count within kind") {
  DynamicGraph g;
  for (int i = 0; i < 5; i++)
    g.add_edge(edge(i, "s" + std::to_string(i), "t" + std::to_string(i),
                    "common"));
  g.add_edge(edge(5, "x", "y", "rare"));
  SelectivityTable t = count_edge_types(g, MapConfig{});
  std::ostringstream os;
  write_stats(os, t);
  std::string out = os.str();
  CHECK(out.find("rare") < out.find("common"));
}

TEST_CASE("missing files raise errors") {
  CHECK_THROWS(read_stream_file("/nonexistent/stream.tsv"));
  CHECK_THROWS(read_query_file("/nonexistent/query.qg"));
  CHECK_THROWS(read_stats_file("/nonexistent/stats.csv"));
}

}  // TEST_SUITE
