#ifndef SGM_SELECTIVITY_HPP
#define SGM_SELECTIVITY_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "sgm/graph.hpp"
#include "sgm/query.hpp"

namespace sgm {

// Folds edge label, selected attributes and (optionally) endpoint vertex
// labels into one mapped edge type.
struct MapConfig {
  std::vector<std::string> attribute_keys;
  bool include_vertex_labels = false;
};

std::string map_edge(const EdgeRecord& e, const DynamicGraph& g,
                     const MapConfig& cfg);
std::string map_query_edge(const QueryGraph& q, uint32_t edge_id,
                           const MapConfig& cfg);

enum class Orientation : uint8_t { Out, In };  // relative to the center vertex

struct Arm {
  std::string type;
  Orientation dir = Orientation::Out;

  auto tie() const { return std::tie(type, dir); }
  bool operator<(const Arm& o) const { return tie() < o.tie(); }
  bool operator==(const Arm& o) const { return tie() == o.tie(); }
};

struct PrimitiveKey {
  enum class Kind : uint8_t { Edge, Path2 };
  Kind kind = Kind::Edge;
  Arm first;   // Edge: the mapped type (dir unused); Path2: lesser arm
  Arm second;  // Path2 only; first <= second lexically

  static PrimitiveKey edge(std::string type) {
    PrimitiveKey k;
    k.kind = Kind::Edge;
    k.first.type = std::move(type);
    return k;
  }
  static PrimitiveKey path2(Arm a, Arm b) {
    if (b < a) std::swap(a, b);
    return PrimitiveKey{Kind::Path2, std::move(a), std::move(b)};
  }

  auto tie() const { return std::tie(kind, first, second); }
  bool operator<(const PrimitiveKey& o) const { return tie() < o.tie(); }
  bool operator==(const PrimitiveKey& o) const { return tie() == o.tie(); }

  std::string to_string() const;
  static std::optional<PrimitiveKey> parse(const std::string& s, Kind kind);
};

// Counts and selectivities of 1-edge and 2-edge-path primitives.
struct SelectivityTable {
  MapConfig config;
  std::map<PrimitiveKey, uint64_t> counts;  // ordered for determinism
  uint64_t total_edges = 0;  // all 1-edge subgraphs seen
  uint64_t total_paths = 0;  // all 2-edge paths counted
  Timestamp snapshot_ts = 0;
  uint64_t edges_sampled = 0;

  uint64_t count(const PrimitiveKey& k) const {
    auto it = counts.find(k);
    return it == counts.end() ? 0 : it->second;
  }
  uint64_t total(PrimitiveKey::Kind kind) const {
    return kind == PrimitiveKey::Kind::Edge ? total_edges : total_paths;
  }
  // count/total of the key's kind; 0 for unseen keys. Throws when the
  // kind's total is zero.
  double selectivity(const PrimitiveKey& k) const;

  void add_edge_observation(const EdgeRecord& e, const DynamicGraph& g);
  void merge_paths(const SelectivityTable& paths);
};

// Histogram of mapped edge types over an edge sequence.
SelectivityTable count_edge_types(const DynamicGraph& g, const MapConfig& cfg);

// Algorithm: per vertex, count incident mapped types with orientation;
// same-type pairs contribute n*(n-1)/2, distinct pairs n1*n2.
SelectivityTable count_2edge_paths(const DynamicGraph& g,
                                   const MapConfig& cfg);

// Primitive key for a 1- or 2-edge query subgraph; nullopt when the edge
// set is not a primitive (wrong size, or no shared vertex).
std::optional<PrimitiveKey> primitive_key_for(
    const QueryGraph& q, std::span<const uint32_t> edge_ids,
    const MapConfig& cfg);

// Rank-order distance between two tables of the same kind.
struct RankDiff {
  size_t discordant = 0;
  size_t comparable_pairs = 0;
  double normalized = 0.0;   // discordant / comparable_pairs
  bool comparable = false;   // false when <2 shared keys
};

RankDiff selectivity_snapshot_diff(const SelectivityTable& a,
                                   const SelectivityTable& b,
                                   PrimitiveKey::Kind kind);

class SJTree;  // sjtree.hpp

// Eq. style product of leaf-subgraph selectivities.
double expected_selectivity(const SJTree& tree, const SelectivityTable& table);
// Ratio of a candidate decomposition's expected selectivity to the pure
// 1-edge decomposition's. Throws on a zero denominator.
double relative_selectivity(const SJTree& tree_k, const SJTree& tree_1,
                            const SelectivityTable& table);

}  // namespace sgm

#endif
