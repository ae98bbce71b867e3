#include "sgm/graph.hpp"

#include <algorithm>

namespace sgm {

VertexId DynamicGraph::intern_vertex(const std::string& name,
                                     const std::string& label) {
  auto it = vertex_ids_.find(name);
  if (it != vertex_ids_.end()) {
    VertexRecord& rec = vertices_[it->second];
    if (!rec.live()) rec.label = label;  // re-creation after eviction
    return it->second;
  }
  VertexId id = static_cast<VertexId>(vertices_.size());
  vertices_.push_back(VertexRecord{name, label});
  out_adj_.emplace_back();
  in_adj_.emplace_back();
  vertex_ids_.emplace(name, id);
  return id;
}

EdgeId DynamicGraph::add_edge(const EdgeInput& in) {
  if (in.timestamp < t_last_)
    throw OrderingViolation("out-of-order edge timestamp " +
                            std::to_string(in.timestamp) + " < " +
                            std::to_string(t_last_));
  VertexId src = intern_vertex(in.src, in.src_label);
  VertexId dst = intern_vertex(in.dst, in.dst_label);
  EdgeId id = next_edge_id_++;
  EdgeRecord rec{id, src, dst, in.label, in.attributes, in.timestamp};
  edges_.emplace(id, std::move(rec));
  out_adj_[src].push_back(id);
  in_adj_[dst].push_back(id);
  vertices_[src].out_degree++;
  vertices_[dst].in_degree++;
  by_time_.push_back(id);
  t_last_ = std::max(t_last_, in.timestamp);
  evict_expired();
  return id;
}

void DynamicGraph::remove_edge(EdgeId id) {
  auto it = edges_.find(id);
  if (it == edges_.end()) return;
  const EdgeRecord& e = it->second;
  auto& out = out_adj_[e.src];
  out.erase(std::find(out.begin(), out.end(), id));
  auto& in = in_adj_[e.dst];
  in.erase(std::find(in.begin(), in.end(), id));
  vertices_[e.src].out_degree--;
  vertices_[e.dst].in_degree--;
  edges_.erase(it);
}

size_t DynamicGraph::evict_expired() {
  if (edges_.empty()) return 0;
  const Timestamp cutoff = t_last_ - window_;  // expired iff ts < cutoff
  size_t removed = 0;
  while (!by_time_.empty()) {
    EdgeId id = by_time_.front();
    auto it = edges_.find(id);
    if (it == edges_.end()) {
      by_time_.pop_front();
      continue;
    }
    if (it->second.timestamp >= cutoff) break;
    by_time_.pop_front();
    remove_edge(id);
    removed++;
  }
  return removed;
}

std::vector<const EdgeRecord*> DynamicGraph::neighbors(
    VertexId v, Direction dir, const std::string* label) const {
  std::vector<const EdgeRecord*> out;
  for_each_incident(v, dir, [&](const EdgeRecord& e) {
    if (label && e.label != *label) return;
    out.push_back(&e);
  });
  return out;
}

uint32_t DynamicGraph::degree(VertexId v, Direction dir) const {
  if (v >= vertices_.size()) return 0;
  const VertexRecord& rec = vertices_[v];
  switch (dir) {
    case Direction::Out:
      return rec.out_degree;
    case Direction::In:
      return rec.in_degree;
    default:
      return rec.in_degree + rec.out_degree;
  }
}

size_t DynamicGraph::live_vertex_count() const {
  size_t n = 0;
  for (const auto& v : vertices_)
    if (v.live()) n++;
  return n;
}

}  // namespace sgm
