#ifndef SGM_QUERY_HPP
#define SGM_QUERY_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgm/graph.hpp"

namespace sgm {

inline constexpr const char* kWildcard = "*";

inline bool label_matches(const std::string& constraint,
                          const std::string& actual) {
  return constraint == kWildcard || constraint == actual;
}

struct QueryVertex {
  std::string label;  // "*" matches any vertex label
};

struct QueryEdge {
  uint32_t src = 0;
  uint32_t dst = 0;
  std::string label;  // "*" matches any edge label
};

struct QueryGraph {
  std::vector<QueryVertex> vertices;
  std::vector<QueryEdge> edges;

  uint32_t add_vertex(std::string label) {
    vertices.push_back(QueryVertex{std::move(label)});
    return static_cast<uint32_t>(vertices.size() - 1);
  }
  uint32_t add_edge(uint32_t src, uint32_t dst, std::string label) {
    edges.push_back(QueryEdge{src, dst, std::move(label)});
    return static_cast<uint32_t>(edges.size() - 1);
  }
  bool connected() const;
};

// Shared query vertices between the two children of an SJ-Tree internal
// node, kept in ascending query-vertex-id order.
struct CutSubgraph {
  std::vector<uint32_t> vertices;
  std::vector<uint32_t> edges;  // empty under edge-disjoint decomposition

  bool empty() const { return vertices.empty(); }
};

using MatchSignature = std::vector<std::pair<uint32_t, EdgeId>>;

struct MatchSignatureHash {
  size_t operator()(const MatchSignature& sig) const {
    size_t h = 0xcbf29ce484222325ull;
    for (const auto& [qe, de] : sig) {
      h = (h ^ qe) * 0x100000001b3ull;
      h = (h ^ de) * 0x100000001b3ull;
    }
    return h;
  }
};

// A (partial) match: edge pairs plus the induced injective vertex map.
struct Match {
  // (query edge id, data edge id), sorted ascending by query edge id.
  std::vector<std::pair<uint32_t, EdgeId>> pairs;
  // (query vertex id, data vertex id), sorted ascending by query vertex id.
  std::vector<std::pair<uint32_t, VertexId>> vertex_map;
  Timestamp earliest = 0;
  Timestamp latest = 0;

  bool empty() const { return pairs.empty(); }

  std::optional<VertexId> image(uint32_t query_vertex) const {
    auto it = std::lower_bound(
        vertex_map.begin(), vertex_map.end(), query_vertex,
        [](const auto& p, uint32_t qv) { return p.first < qv; });
    if (it == vertex_map.end() || it->first != query_vertex)
      return std::nullopt;
    return it->second;
  }

  // Adds binding query_vertex -> v; returns false on conflict or on a
  // violation of vertex injectivity.
  bool bind_vertex(uint32_t query_vertex, VertexId v);
  // Adds the pair and both endpoint bindings; false on any conflict.
  bool bind_edge(uint32_t query_edge, const QueryEdge& qe, const EdgeRecord& e);
  bool uses_data_edge(EdgeId id) const {
    for (const auto& [qe, de] : pairs)
      if (de == id) return true;
    return false;
  }
};

Match make_single_edge_match(uint32_t query_edge, const QueryEdge& qe,
                             const EdgeRecord& e);

// Union of two matches of sibling subgraphs. Fails when the vertex maps
// disagree, the combined map is not injective, or a data edge is reused
// by two different query edges.
std::optional<Match> join_matches(const Match& m1, const Match& m2);

// Projection onto the cut: data-vertex ids in ascending query-vertex order.
using JoinKey = std::vector<VertexId>;

struct JoinKeyHash {
  size_t operator()(const JoinKey& k) const {
    size_t h = 0x9e3779b97f4a7c15ull;
    for (VertexId v : k) h = (h ^ v) * 0x100000001b3ull;
    return h;
  }
};

JoinKey project(const Match& m, const CutSubgraph& cut);

inline Timestamp match_span(const Match& m) {
  if (m.empty()) throw std::logic_error("match_span on empty match");
  return m.latest - m.earliest;
}

// Dedupe key: the sorted pair list itself.
inline const MatchSignature& canonical_signature(const Match& m) {
  return m.pairs;
}

}  // namespace sgm

#endif
