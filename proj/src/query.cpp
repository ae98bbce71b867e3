#include "sgm/query.hpp"

namespace sgm {

bool QueryGraph::connected() const {
  if (vertices.empty()) return true;
  std::vector<bool> seen(vertices.size(), false);
  std::vector<uint32_t> stack{0};
  seen[0] = true;
  size_t visited = 1;
  while (!stack.empty()) {
    uint32_t v = stack.back();
    stack.pop_back();
    for (const QueryEdge& e : edges) {
      uint32_t other;
      if (e.src == v)
        other = e.dst;
      else if (e.dst == v)
        other = e.src;
      else
        continue;
      if (!seen[other]) {
        seen[other] = true;
        visited++;
        stack.push_back(other);
      }
    }
  }
  return visited == vertices.size();
}

bool Match::bind_vertex(uint32_t query_vertex, VertexId v) {
  auto it = std::lower_bound(
      vertex_map.begin(), vertex_map.end(), query_vertex,
      [](const auto& p, uint32_t qv) { return p.first < qv; });
  if (it != vertex_map.end() && it->first == query_vertex)
    return it->second == v;
  for (const auto& [qv, dv] : vertex_map)
    if (dv == v) return false;  // injectivity
  vertex_map.insert(it, {query_vertex, v});
  return true;
}

bool Match::bind_edge(uint32_t query_edge, const QueryEdge& qe,
                      const EdgeRecord& e) {
  if (uses_data_edge(e.id)) return false;
  // Tentative vertex bindings; callers copy the match before binding.
  if (!bind_vertex(qe.src, e.src)) return false;
  if (!bind_vertex(qe.dst, e.dst)) return false;
  auto it = std::lower_bound(
      pairs.begin(), pairs.end(), query_edge,
      [](const auto& p, uint32_t q) { return p.first < q; });
  pairs.insert(it, {query_edge, e.id});
  if (pairs.size() == 1) {
    earliest = latest = e.timestamp;
  } else {
    earliest = std::min(earliest, e.timestamp);
    latest = std::max(latest, e.timestamp);
  }
  return true;
}

Match make_single_edge_match(uint32_t query_edge, const QueryEdge& qe,
                             const EdgeRecord& e) {
  Match m;
  bool ok = m.bind_edge(query_edge, qe, e);
  if (!ok) throw std::logic_error("make_single_edge_match: inconsistent edge");
  return m;
}

std::optional<Match> join_matches(const Match& m1, const Match& m2) {
  Match out = m1;
  // Merge vertex maps: agreement on shared query vertices, injectivity
  // across the union.
  for (const auto& [qv, dv] : m2.vertex_map) {
    if (!out.bind_vertex(qv, dv)) return std::nullopt;
  }
  // Merge edge pairs: a data edge may serve only one query edge.
  for (const auto& [qe, de] : m2.pairs) {
    auto it = std::lower_bound(
        out.pairs.begin(), out.pairs.end(), qe,
        [](const auto& p, uint32_t q) { return p.first < q; });
    if (it != out.pairs.end() && it->first == qe) {
      if (it->second != de) return std::nullopt;
      continue;
    }
    if (out.uses_data_edge(de)) return std::nullopt;
    out.pairs.insert(it, {qe, de});
  }
  out.earliest = std::min(m1.earliest, m2.earliest);
  out.latest = std::max(m1.latest, m2.latest);
  return out;
}

JoinKey project(const Match& m, const CutSubgraph& cut) {
  JoinKey key;
  key.reserve(cut.vertices.size());
  for (uint32_t qv : cut.vertices) {
    auto dv = m.image(qv);
    if (!dv)
      throw std::logic_error("project: cut vertex " + std::to_string(qv) +
                             " unmapped");
    key.push_back(*dv);
  }
  return key;
}

}  // namespace sgm
