#ifndef SGM_GRAPH_HPP
#define SGM_GRAPH_HPP

#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sgm {

using VertexId = uint32_t;
using EdgeId = uint64_t;
using Timestamp = int64_t;

// A window wide enough to never evict anything.
constexpr Timestamp kNoWindow = std::numeric_limits<Timestamp>::max() / 4;

enum class Direction { Out, In, Both };

struct OrderingViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct VertexRecord {
  std::string name;   // external id
  std::string label;
  uint32_t in_degree = 0;
  uint32_t out_degree = 0;

  bool live() const { return in_degree + out_degree > 0; }
};

// One line of the edge stream, before vertex ids are interned.
struct EdgeInput {
  Timestamp timestamp = 0;
  std::string src;
  std::string src_label;
  std::string label;
  std::string dst;
  std::string dst_label;
  std::vector<std::pair<std::string, std::string>> attributes;
};

struct EdgeRecord {
  EdgeId id = 0;
  VertexId src = 0;
  VertexId dst = 0;
  std::string label;
  std::vector<std::pair<std::string, std::string>> attributes;
  Timestamp timestamp = 0;

  const std::string* attr(std::string_view key) const {
    for (const auto& [k, v] : attributes)
      if (k == key) return &v;
    return nullptr;
  }
};

// Windowed store for the dynamic, directed, labeled multi-edge graph.
// Ingestion must be timestamp-ordered; edges strictly older than
// t_last - window are evicted eagerly on every insert.
class DynamicGraph {
 public:
  explicit DynamicGraph(Timestamp window = kNoWindow) : window_(window) {}

  EdgeId add_edge(const EdgeInput& in);
  size_t evict_expired();

  // Live incident edges of v matching direction and optional label filter.
  std::vector<const EdgeRecord*> neighbors(
      VertexId v, Direction dir = Direction::Both,
      const std::string* label = nullptr) const;

  // fn(const EdgeRecord&). Direction::Both visits a self-loop once.
  template <typename Fn>
  void for_each_incident(VertexId v, Direction dir, Fn&& fn) const {
    if (v >= vertices_.size()) return;
    if (dir == Direction::Out || dir == Direction::Both) {
      for (EdgeId id : out_adj_[v]) fn(edges_.at(id));
    }
    if (dir == Direction::In || dir == Direction::Both) {
      for (EdgeId id : in_adj_[v]) {
        const EdgeRecord& e = edges_.at(id);
        if (dir == Direction::Both && e.src == e.dst) continue;
        fn(e);
      }
    }
  }

  const EdgeRecord* edge(EdgeId id) const {
    auto it = edges_.find(id);
    return it == edges_.end() ? nullptr : &it->second;
  }
  bool vertex_live(VertexId v) const {
    return v < vertices_.size() && vertices_[v].live();
  }
  const VertexRecord& vertex(VertexId v) const { return vertices_.at(v); }
  std::optional<VertexId> find_vertex(const std::string& name) const {
    auto it = vertex_ids_.find(name);
    if (it == vertex_ids_.end()) return std::nullopt;
    return it->second;
  }
  uint32_t degree(VertexId v, Direction dir) const;

  size_t live_edge_count() const { return edges_.size(); }
  size_t live_vertex_count() const;
  // Total distinct vertices ever interned (ids are dense in [0, this)).
  size_t vertex_slots() const { return vertices_.size(); }
  Timestamp t_last() const { return t_last_; }
  Timestamp window() const { return window_; }
  bool empty() const { return edges_.empty(); }

  template <typename Fn>
  void for_each_edge(Fn&& fn) const {
    for (const auto& [id, e] : edges_) fn(e);
  }
  // Deterministic order (ascending edge id == ingestion order).
  template <typename Fn>
  void for_each_edge_ordered(Fn&& fn) const {
    for (EdgeId id : by_time_) fn(edges_.at(id));
  }

 private:
  VertexId intern_vertex(const std::string& name, const std::string& label);
  void remove_edge(EdgeId id);

  Timestamp window_;
  Timestamp t_last_ = std::numeric_limits<Timestamp>::min();
  std::vector<VertexRecord> vertices_;
  std::unordered_map<std::string, VertexId> vertex_ids_;
  std::unordered_map<EdgeId, EdgeRecord> edges_;
  std::vector<std::vector<EdgeId>> out_adj_;
  std::vector<std::vector<EdgeId>> in_adj_;
  std::deque<EdgeId> by_time_;  // ingestion order == timestamp order
  EdgeId next_edge_id_ = 0;
};

}  // namespace sgm

#endif
