#include "sgm/decompose.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace sgm {

std::string to_string(Decomposition d) {
  switch (d) {
    case Decomposition::Single:
      return "single";
    case Decomposition::Path:
      return "path";
    default:
      return "auto";
  }
}

std::string to_string(Execution e) {
  return e == Execution::Eager ? "eager" : "lazy";
}

size_t ResidualQuery::live_edge_count() const {
  return std::count(edge_alive.begin(), edge_alive.end(), true);
}

bool ResidualQuery::vertex_alive(uint32_t v) const {
  for (size_t i = 0; i < query->edges.size(); i++) {
    if (!edge_alive[i]) continue;
    if (query->edges[i].src == v || query->edges[i].dst == v) return true;
  }
  return false;
}

void remove_subgraph(ResidualQuery& residual,
                     std::span<const uint32_t> sub_edges) {
  for (uint32_t eid : sub_edges) {
    if (eid >= residual.edge_alive.size() || !residual.edge_alive[eid])
      throw std::invalid_argument("remove_subgraph: edge not in residual");
    residual.edge_alive[eid] = false;
  }
}

namespace {

// All 2-edge path keys instantiable in the query, with counts.
std::vector<PrimitiveKey> query_path2_keys(const QueryGraph& query,
                                           const MapConfig& cfg) {
  std::set<PrimitiveKey> keys;
  for (uint32_t v = 0; v < query.vertices.size(); v++) {
    for (uint32_t e1 = 0; e1 < query.edges.size(); e1++) {
      if (query.edges[e1].src != v && query.edges[e1].dst != v) continue;
      for (uint32_t e2 = e1 + 1; e2 < query.edges.size(); e2++) {
        if (query.edges[e2].src != v && query.edges[e2].dst != v) continue;
        // Key at this specific center.
        auto arm = [&](uint32_t eid) {
          const QueryEdge& e = query.edges[eid];
          return Arm{map_query_edge(query, eid, cfg),
                     e.src == v ? Orientation::Out : Orientation::In};
        };
        keys.insert(PrimitiveKey::path2(arm(e1), arm(e2)));
      }
    }
  }
  return {keys.begin(), keys.end()};
}

std::vector<PrimitiveKey> query_edge_keys(const QueryGraph& query,
                                          const MapConfig& cfg) {
  std::set<PrimitiveKey> keys;
  for (uint32_t e = 0; e < query.edges.size(); e++)
    keys.insert(PrimitiveKey::edge(map_query_edge(query, e, cfg)));
  return {keys.begin(), keys.end()};
}

// Ascending (count, key); unseen keys sort first.
void sort_by_selectivity(std::vector<PrimitiveKey>& keys,
                         const SelectivityTable& table) {
  std::stable_sort(keys.begin(), keys.end(),
                   [&](const PrimitiveKey& a, const PrimitiveKey& b) {
                     uint64_t ca = table.count(a), cb = table.count(b);
                     if (ca != cb) return ca < cb;
                     return a < b;
                   });
}

}  // namespace

PrimitiveSet make_primitive_set(const QueryGraph& query,
                                const SelectivityTable& table,
                                Decomposition mode) {
  if (mode == Decomposition::Auto)
    throw std::invalid_argument("auto must be resolved before building");
  PrimitiveSet M;
  std::vector<PrimitiveKey> edges = query_edge_keys(query, table.config);
  sort_by_selectivity(edges, table);
  if (mode == Decomposition::Path) {
    std::vector<PrimitiveKey> paths = query_path2_keys(query, table.config);
    // Unseen 2-edge combinations are excluded: those fragments fall back
    // to 1-edge leaves instead of search primitives nobody estimated.
    std::erase_if(paths,
                  [&](const PrimitiveKey& k) { return table.count(k) == 0; });
    sort_by_selectivity(paths, table);
    M.keys = std::move(paths);
  }
  M.keys.insert(M.keys.end(), edges.begin(), edges.end());
  return M;
}

std::optional<PrimitiveInstance> find_primitive_instance(
    const ResidualQuery& residual, const std::set<uint32_t>& frontier,
    const PrimitiveKey& key, const MapConfig& cfg) {
  const QueryGraph& q = *residual.query;
  auto touches_frontier = [&](std::span<const uint32_t> edges) {
    if (frontier.empty()) return true;
    for (uint32_t eid : edges) {
      if (frontier.count(q.edges[eid].src) || frontier.count(q.edges[eid].dst))
        return true;
    }
    return false;
  };

  if (key.kind == PrimitiveKey::Kind::Edge) {
    for (uint32_t e = 0; e < q.edges.size(); e++) {
      if (!residual.edge_alive[e]) continue;
      if (map_query_edge(q, e, cfg) != key.first.type) continue;
      uint32_t edges[1] = {e};
      if (!touches_frontier(edges)) continue;
      return PrimitiveInstance{{e}};
    }
    return std::nullopt;
  }

  for (uint32_t v = 0; v < q.vertices.size(); v++) {
    for (uint32_t e1 = 0; e1 < q.edges.size(); e1++) {
      if (!residual.edge_alive[e1]) continue;
      if (q.edges[e1].src != v && q.edges[e1].dst != v) continue;
      for (uint32_t e2 = e1 + 1; e2 < q.edges.size(); e2++) {
        if (!residual.edge_alive[e2]) continue;
        if (q.edges[e2].src != v && q.edges[e2].dst != v) continue;
        auto arm = [&](uint32_t eid) {
          const QueryEdge& e = q.edges[eid];
          return Arm{map_query_edge(q, eid, cfg),
                     e.src == v ? Orientation::Out : Orientation::In};
        };
        if (!(PrimitiveKey::path2(arm(e1), arm(e2)) == key)) continue;
        uint32_t edges[2] = {e1, e2};
        if (!touches_frontier(edges)) continue;
        return PrimitiveInstance{{e1, e2}};
      }
    }
  }
  return std::nullopt;
}

BuildReport decompose_query(const QueryGraph& query, const PrimitiveSet& M,
                            const MapConfig& cfg) {
  if (!query.connected())
    throw std::invalid_argument("query graph must be connected");
  if (query.edges.empty())
    throw std::invalid_argument("query graph has no edges");

  BuildReport report;
  ResidualQuery residual(query);
  std::set<uint32_t> frontier;
  while (residual.live_edge_count() > 0) {
    std::optional<PrimitiveInstance> found;
    for (const PrimitiveKey& key : M.keys) {
      found = find_primitive_instance(residual, frontier, key, cfg);
      if (found) break;
    }
    if (!found && !frontier.empty()) {
      // Residual disconnected from the frontier: global probe.
      report.frontier_fallback = true;
      for (const PrimitiveKey& key : M.keys) {
        found = find_primitive_instance(residual, {}, key, cfg);
        if (found) break;
      }
    }
    if (!found)
      throw std::invalid_argument(
          "no primitive in M covers the residual query");
    for (uint32_t eid : found->edges) {
      frontier.insert(query.edges[eid].src);
      frontier.insert(query.edges[eid].dst);
    }
    remove_subgraph(residual, found->edges);
    report.leaf_edges.push_back(found->edges);
  }
  return report;
}

SJTree build_sjtree(const QueryGraph& query, const PrimitiveSet& M,
                    const MapConfig& cfg) {
  BuildReport report = decompose_query(query, M, cfg);
  return SJTree::from_leaves(query, std::move(report.leaf_edges));
}

StrategyReport select_strategy(const QueryGraph& query,
                               const SelectivityTable& table,
                               double threshold) {
  StrategyReport report;
  SJTree t1 = build_sjtree(
      query, make_primitive_set(query, table, Decomposition::Single),
      table.config);
  SJTree t2 = build_sjtree(
      query, make_primitive_set(query, table, Decomposition::Path),
      table.config);
  report.expected_single = expected_selectivity(t1, table);
  report.expected_path = expected_selectivity(t2, table);
  report.chosen.execution = Execution::Lazy;
  if (report.expected_single == 0.0) {
    report.forced = true;
    report.chosen.decomposition = Decomposition::Path;
    report.warnings.push_back(
        "query contains an edge type never observed in the stream; "
        "forcing path decomposition");
    return report;
  }
  report.relative = report.expected_path / report.expected_single;
  report.chosen.decomposition = report.relative < threshold
                                    ? Decomposition::Path
                                    : Decomposition::Single;
  return report;
}

LeafOrderReport leaf_order_check(const SJTree& tree,
                                 const SelectivityTable& table,
                                 double avg_degree) {
  LeafOrderReport report;
  const QueryGraph& query = tree.query();
  for (uint32_t leaf_id : tree.leaves()) {
    const SJTreeNode& n = tree.node(leaf_id);
    auto key = primitive_key_for(query, n.edges, table.config);
    report.leaf_frequencies.push_back(key ? table.count(*key) : 0);
  }
  for (size_t i = 1; i < report.leaf_frequencies.size(); i++) {
    if (report.leaf_frequencies[i] < report.leaf_frequencies[i - 1])
      report.ascending = false;
  }

  // Theorem-1 style check: leaf 0 has minimum frequency among the
  // query's primitives of the same size.
  if (!tree.leaves().empty()) {
    const SJTreeNode& first = tree.node(tree.leaf(0));
    std::set<PrimitiveKey> same_size;
    if (first.edges.size() == 1) {
      for (uint32_t e = 0; e < query.edges.size(); e++)
        same_size.insert(
            PrimitiveKey::edge(map_query_edge(query, e, table.config)));
    } else {
      for (uint32_t v = 0; v < query.vertices.size(); v++) {
        for (uint32_t e1 = 0; e1 < query.edges.size(); e1++) {
          if (query.edges[e1].src != v && query.edges[e1].dst != v) continue;
          for (uint32_t e2 = e1 + 1; e2 < query.edges.size(); e2++) {
            if (query.edges[e2].src != v && query.edges[e2].dst != v)
              continue;
            uint32_t pair[2] = {e1, e2};
            auto key = primitive_key_for(query, pair, table.config);
            if (key) same_size.insert(*key);
          }
        }
      }
    }
    for (const PrimitiveKey& k : same_size) {
      if (table.count(k) < report.leaf_frequencies[0]) {
        report.first_leaf_minimal = false;
        break;
      }
    }
  }

  // Observation-style advisory: a 2-edge leaf with a much more frequent
  // 1-edge sub-primitive is worth decomposing further.
  if (avg_degree > 0.0) {
    for (uint32_t leaf_id : tree.leaves()) {
      const SJTreeNode& n = tree.node(leaf_id);
      if (n.edges.size() < 2) continue;
      auto key = primitive_key_for(query, n.edges, table.config);
      if (!key) continue;
      double leaf_freq = static_cast<double>(table.count(*key));
      double bound =
          leaf_freq / (avg_degree * static_cast<double>(n.vertices.size()));
      for (uint32_t eid : n.edges) {
        PrimitiveKey sub =
            PrimitiveKey::edge(map_query_edge(query, eid, table.config));
        if (static_cast<double>(table.count(sub)) > bound) {
          report.notes.push_back("leaf " + std::to_string(n.leaf_ordinal) +
                                 ": sub-primitive " + sub.to_string() +
                                 " is frequent; further decomposition may "
                                 "be efficient");
          break;
        }
      }
    }
  }
  return report;
}

}  // namespace sgm
