#include "sgm/selectivity.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "sgm/sjtree.hpp"

namespace sgm {

std::string map_edge(const EdgeRecord& e, const DynamicGraph& g,
                     const MapConfig& cfg) {
  std::string type = e.label;
  for (const std::string& key : cfg.attribute_keys) {
    type += ':';
    if (const std::string* v = e.attr(key)) type += *v;
  }
  if (cfg.include_vertex_labels) {
    type += '|';
    type += g.vertex(e.src).label;
    type += '>';
    type += g.vertex(e.dst).label;
  }
  return type;
}

std::string map_query_edge(const QueryGraph& q, uint32_t edge_id,
                           const MapConfig& cfg) {
  const QueryEdge& e = q.edges.at(edge_id);
  std::string type = e.label;
  for (size_t i = 0; i < cfg.attribute_keys.size(); i++) type += ':';
  if (cfg.include_vertex_labels) {
    type += '|';
    type += q.vertices.at(e.src).label;
    type += '>';
    type += q.vertices.at(e.dst).label;
  }
  return type;
}

std::string PrimitiveKey::to_string() const {
  auto arm_str = [](const Arm& a) {
    return a.type + (a.dir == Orientation::Out ? ">" : "<");
  };
  if (kind == Kind::Edge) return first.type;
  return arm_str(first) + "~" + arm_str(second);
}

std::optional<PrimitiveKey> PrimitiveKey::parse(const std::string& s,
                                                Kind kind) {
  if (s.empty()) return std::nullopt;
  if (kind == Kind::Edge) return PrimitiveKey::edge(s);
  auto sep = s.find('~');  // mapped types must not contain '~'
  if (sep == std::string::npos) return std::nullopt;
  auto parse_arm = [](const std::string& t) -> std::optional<Arm> {
    if (t.size() < 2) return std::nullopt;
    char d = t.back();
    if (d != '>' && d != '<') return std::nullopt;
    return Arm{t.substr(0, t.size() - 1),
               d == '>' ? Orientation::Out : Orientation::In};
  };
  auto a = parse_arm(s.substr(0, sep));
  auto b = parse_arm(s.substr(sep + 1));
  if (!a || !b) return std::nullopt;
  return PrimitiveKey::path2(*a, *b);
}

double SelectivityTable::selectivity(const PrimitiveKey& k) const {
  uint64_t t = total(k.kind);
  if (t == 0) throw std::logic_error("selectivity over an empty table");
  return static_cast<double>(count(k)) / static_cast<double>(t);
}

void SelectivityTable::add_edge_observation(const EdgeRecord& e,
                                            const DynamicGraph& g) {
  counts[PrimitiveKey::edge(map_edge(e, g, config))]++;
  total_edges++;
  edges_sampled++;
  snapshot_ts = e.timestamp;
}

void SelectivityTable::merge_paths(const SelectivityTable& paths) {
  for (const auto& [key, n] : paths.counts) {
    if (key.kind == PrimitiveKey::Kind::Path2) counts[key] += n;
  }
  total_paths += paths.total_paths;
}

SelectivityTable count_edge_types(const DynamicGraph& g,
                                  const MapConfig& cfg) {
  SelectivityTable table;
  table.config = cfg;
  g.for_each_edge_ordered(
      [&](const EdgeRecord& e) { table.add_edge_observation(e, g); });
  return table;
}

SelectivityTable count_2edge_paths(const DynamicGraph& g,
                                   const MapConfig& cfg) {
  SelectivityTable table;
  table.config = cfg;
  table.snapshot_ts = g.t_last();
  for (VertexId v = 0; v < g.vertex_slots(); v++) {
    if (!g.vertex_live(v)) continue;
    // Counter of incident mapped types with orientation relative to v.
    // A self-loop contributes one out arm and one in arm.
    std::map<Arm, uint64_t> incident;
    g.for_each_incident(v, Direction::Out, [&](const EdgeRecord& e) {
      incident[Arm{map_edge(e, g, cfg), Orientation::Out}]++;
      if (e.src == e.dst) incident[Arm{map_edge(e, g, cfg), Orientation::In}]++;
    });
    g.for_each_incident(v, Direction::In, [&](const EdgeRecord& e) {
      if (e.src == e.dst) return;  // handled above
      incident[Arm{map_edge(e, g, cfg), Orientation::In}]++;
    });
    for (auto it1 = incident.begin(); it1 != incident.end(); ++it1) {
      uint64_t n1 = it1->second;
      if (n1 >= 2) {
        uint64_t c = n1 * (n1 - 1) / 2;
        // A self-loop's two arms must not pair with each other.
        table.counts[PrimitiveKey::path2(it1->first, it1->first)] += c;
        table.total_paths += c;
      }
      auto it2 = it1;
      for (++it2; it2 != incident.end(); ++it2) {
        uint64_t c = n1 * it2->second;
        table.counts[PrimitiveKey::path2(it1->first, it2->first)] += c;
        table.total_paths += c;
      }
    }
    // Correct the self-pairing of each self-loop's own two arms.
    g.for_each_incident(v, Direction::Out, [&](const EdgeRecord& e) {
      if (e.src != e.dst) return;
      std::string t = map_edge(e, g, cfg);
      PrimitiveKey k = PrimitiveKey::path2(Arm{t, Orientation::Out},
                                           Arm{t, Orientation::In});
      auto it = table.counts.find(k);
      if (it != table.counts.end() && it->second > 0) {
        it->second--;
        table.total_paths--;
        if (it->second == 0) table.counts.erase(it);
      }
    });
  }
  return table;
}

std::optional<PrimitiveKey> primitive_key_for(
    const QueryGraph& q, std::span<const uint32_t> edge_ids,
    const MapConfig& cfg) {
  if (edge_ids.size() == 1)
    return PrimitiveKey::edge(map_query_edge(q, edge_ids[0], cfg));
  if (edge_ids.size() != 2) return std::nullopt;
  const QueryEdge& a = q.edges.at(edge_ids[0]);
  const QueryEdge& b = q.edges.at(edge_ids[1]);
  auto arm = [&](const QueryEdge& e, uint32_t eid, uint32_t center) {
    return Arm{map_query_edge(q, eid, cfg),
               e.src == center ? Orientation::Out : Orientation::In};
  };
  std::optional<PrimitiveKey> best;
  for (uint32_t center : {a.src, a.dst}) {
    if (center != b.src && center != b.dst) continue;
    PrimitiveKey k = PrimitiveKey::path2(arm(a, edge_ids[0], center),
                                         arm(b, edge_ids[1], center));
    if (!best || k < *best) best = k;  // deterministic on a double share
  }
  return best;
}

RankDiff selectivity_snapshot_diff(const SelectivityTable& a,
                                   const SelectivityTable& b,
                                   PrimitiveKey::Kind kind) {
  // Keys present in both, with both counts.
  std::vector<std::pair<uint64_t, uint64_t>> shared;
  for (const auto& [key, ca] : a.counts) {
    if (key.kind != kind) continue;
    auto it = b.counts.find(key);
    if (it != b.counts.end()) shared.emplace_back(ca, it->second);
  }
  RankDiff diff;
  if (shared.size() < 2) return diff;  // incomparable
  diff.comparable = true;
  for (size_t i = 0; i < shared.size(); i++) {
    for (size_t j = i + 1; j < shared.size(); j++) {
      auto da = (shared[i].first > shared[j].first) -
                (shared[i].first < shared[j].first);
      auto db = (shared[i].second > shared[j].second) -
                (shared[i].second < shared[j].second);
      diff.comparable_pairs++;
      if (da * db < 0) diff.discordant++;
    }
  }
  diff.normalized = static_cast<double>(diff.discordant) /
                    static_cast<double>(diff.comparable_pairs);
  return diff;
}

double expected_selectivity(const SJTree& tree,
                            const SelectivityTable& table) {
  double product = 1.0;
  for (uint32_t leaf_id : tree.leaves()) {
    const SJTreeNode& n = tree.node(leaf_id);
    auto key = primitive_key_for(tree.query(), n.edges, table.config);
    if (!key)
      throw std::logic_error("SJ-Tree leaf is not a 1- or 2-edge primitive");
    product *= table.selectivity(*key);
  }
  return product;
}

double relative_selectivity(const SJTree& tree_k, const SJTree& tree_1,
                            const SelectivityTable& table) {
  double denom = expected_selectivity(tree_1, table);
  if (denom == 0.0)
    throw std::domain_error("relative selectivity undefined: S(T_1) = 0");
  return expected_selectivity(tree_k, table) / denom;
}

}  // namespace sgm
