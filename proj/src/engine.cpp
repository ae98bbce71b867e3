#include "sgm/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace sgm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool edge_binds(const QueryGraph& q, const QueryEdge& qe,
                const DynamicGraph& g, const EdgeRecord& e) {
  return label_matches(qe.label, e.label) &&
         label_matches(q.vertices[qe.src].label, g.vertex(e.src).label) &&
         label_matches(q.vertices[qe.dst].label, g.vertex(e.dst).label);
}

// Small backtracking core for 1-3 edge primitives: binds the remaining
// query edges by scanning adjacency of already-mapped endpoints.
struct PrimitiveMatcher {
  const DynamicGraph& g;
  const QueryGraph& q;
  std::span<const uint32_t> edge_ids;
  std::vector<Match> results;
  std::unordered_set<MatchSignature, MatchSignatureHash> seen;

  void emit(const Match& m) {
    if (seen.insert(canonical_signature(m)).second) results.push_back(m);
  }

  void extend(const Match& partial, std::vector<uint32_t> remaining) {
    if (remaining.empty()) {
      emit(partial);
      return;
    }
    // Pick a remaining query edge with a mapped endpoint.
    size_t pick = remaining.size();
    for (size_t i = 0; i < remaining.size(); i++) {
      const QueryEdge& qe = q.edges[remaining[i]];
      if (partial.image(qe.src) || partial.image(qe.dst)) {
        pick = i;
        break;
      }
    }
    if (pick == remaining.size())
      throw std::logic_error("primitive subgraph is disconnected");
    uint32_t qeid = remaining[pick];
    remaining.erase(remaining.begin() + static_cast<ptrdiff_t>(pick));
    const QueryEdge& qe = q.edges[qeid];

    auto try_edge = [&](const EdgeRecord& e) {
      if (!edge_binds(q, qe, g, e)) return;
      Match next = partial;
      if (next.bind_edge(qeid, qe, e)) extend(next, remaining);
    };
    if (auto src = partial.image(qe.src)) {
      g.for_each_incident(*src, Direction::Out, try_edge);
    } else {
      auto dst = partial.image(qe.dst);
      g.for_each_incident(*dst, Direction::In, try_edge);
    }
  }
};

}  // namespace

std::vector<Match> subgraph_iso_around_edge(const DynamicGraph& g,
                                            const QueryGraph& q,
                                            std::span<const uint32_t> edge_ids,
                                            const EdgeRecord& e) {
  if (edge_ids.empty() || edge_ids.size() > 3)
    throw std::logic_error("primitive matcher supports 1-3 edge subgraphs");
  PrimitiveMatcher matcher{g, q, edge_ids};
  // The new edge may fill any role of the primitive.
  for (uint32_t qeid : edge_ids) {
    const QueryEdge& qe = q.edges[qeid];
    if (!edge_binds(q, qe, g, e)) continue;
    Match seed;
    if (!seed.bind_edge(qeid, qe, e)) continue;
    std::vector<uint32_t> remaining;
    for (uint32_t other : edge_ids)
      if (other != qeid) remaining.push_back(other);
    matcher.extend(seed, std::move(remaining));
  }
  return std::move(matcher.results);
}

std::vector<Match> subgraph_iso_around_vertex(
    const DynamicGraph& g, const QueryGraph& q,
    std::span<const uint32_t> edge_ids, VertexId anchor) {
  if (edge_ids.empty() || edge_ids.size() > 3)
    throw std::logic_error("primitive matcher supports 1-3 edge subgraphs");
  if (!g.vertex_live(anchor)) return {};
  PrimitiveMatcher matcher{g, q, edge_ids};
  std::vector<uint32_t> verts = subgraph_vertices(q, edge_ids);
  for (uint32_t qv : verts) {
    if (!label_matches(q.vertices[qv].label, g.vertex(anchor).label)) continue;
    Match seed;
    if (!seed.bind_vertex(qv, anchor)) continue;
    matcher.extend(seed, {edge_ids.begin(), edge_ids.end()});
  }
  return std::move(matcher.results);
}

Engine::Engine(SJTree tree, EngineConfig config)
    : tree_(std::move(tree)), config_(config), graph_(config.window) {
  gate_.window = config_.window;
}

bool Engine::edge_fits_leaf(const EdgeRecord& e, size_t ordinal) const {
  const SJTreeNode& leaf = tree_.node(tree_.leaf(ordinal));
  for (uint32_t qeid : leaf.edges) {
    if (edge_binds(tree_.query(), tree_.query().edges[qeid], graph_, e))
      return true;
  }
  return false;
}

void Engine::enable_vertex(VertexId v, size_t ordinal, size_t budget,
                           Timestamp stamp, std::vector<VertexId>& fresh) {
  auto r = gate_.enable(v, ordinal, budget, stamp, now_);
  if (r.fresh) fresh.push_back(v);
  if (!r.advanced || budget == 0) return;
  // Spread along live edges that could belong to the leaf, so that a
  // multi-edge leaf instance growing away from the enabled vertex still
  // passes the endpoint gate when its later edges arrive. Each hop spends
  // one unit of budget. Re-spreading whenever the stamp advances keeps
  // the whole region alive as long as the newest match that enabled it.
  const SJTreeNode& leaf = tree_.node(tree_.leaf(ordinal));
  graph_.for_each_incident(v, Direction::Both, [&](const EdgeRecord& e) {
    for (uint32_t qeid : leaf.edges) {
      if (!edge_binds(tree_.query(), tree_.query().edges[qeid], graph_, e))
        continue;
      VertexId other = e.src == v ? e.dst : e.src;
      enable_vertex(other, ordinal, budget - 1, stamp, fresh);
      break;
    }
  });
}

void Engine::backsearch_vertex(size_t ordinal, VertexId v,
                               const EventSink& sink) {
  const SJTreeNode& leaf = tree_.node(tree_.leaf(ordinal));
  metrics_.backsearch_calls++;
  metrics_.iso_calls++;
  auto found =
      subgraph_iso_around_vertex(graph_, tree_.query(), leaf.edges, v);
  for (const Match& fm : found) deliver(ordinal, fm, sink);
}

void Engine::enable_and_backsearch(size_t next_ordinal, uint32_t node_id,
                                   const Match& m, const EventSink& sink) {
  const SJTreeNode& leaf = tree_.node(tree_.leaf(next_ordinal));
  const SJTreeNode& n = tree_.node(node_id);
  const SJTreeNode& parent = tree_.node(static_cast<uint32_t>(n.parent));
  size_t budget = leaf.edges.size() - 1;
  // Only the cut vertices matter: a sibling-leaf instance joins this
  // match exactly when it maps the cut onto the same data vertices.
  std::vector<VertexId> fresh;
  for (uint32_t qv : parent.cut.vertices) {
    if (auto dv = m.image(qv))
      enable_vertex(*dv, next_ordinal, budget, now_, fresh);
  }
  // Search existing window content around every vertex that just became
  // enabled -- including the ones reached by spreading -- so a sibling
  // instance that appeared earlier is still found.
  for (VertexId v : fresh) backsearch_vertex(next_ordinal, v, sink);
}

void Engine::emit(const Match& m, const EventSink& sink) {
  if (config_.dedupe &&
      !emitted_.insert(canonical_signature(m)).second)
    return;
  metrics_.matches_emitted++;
  sink(MatchEvent{m, now_});
}

void Engine::on_insert(uint32_t node_id, const Match& m,
                       const EventSink& sink) {
  if (config_.mode != Execution::Lazy) return;
  // A match at a left child (leaf 0 or an accumulated internal node)
  // turns on the search for the right-sibling leaf.
  const SJTreeNode& n = tree_.node(node_id);
  if (n.sibling < 0) return;
  const SJTreeNode& sib = tree_.node(static_cast<uint32_t>(n.sibling));
  if (!sib.is_leaf() || sib.leaf_ordinal <= 0) return;
  if (n.is_leaf() && n.leaf_ordinal != 0) return;  // right children gate nothing
  enable_and_backsearch(static_cast<size_t>(sib.leaf_ordinal), node_id, m,
                        sink);
}

void Engine::deliver(size_t ordinal, const Match& m, const EventSink& sink) {
  if (match_span(m) >= config_.window) return;
  if (tree_.leaf_count() == 1) {
    emit(m, sink);
    return;
  }
  const bool outermost = !in_update_;
  in_update_ = true;
  auto start = Clock::now();
  tree_.update(
      tree_.leaf(ordinal), m, now_, config_.window,
      [&](const Match& complete) { emit(complete, sink); },
      [&](uint32_t node_id, const Match& stored) {
        on_insert(node_id, stored, sink);
      });
  if (outermost) {
    metrics_.update_seconds += seconds_since(start);
    in_update_ = false;
  }
}

void Engine::process_edge(const EdgeInput& in, const EventSink& sink) {
  auto total_start = Clock::now();
  EdgeId id = graph_.add_edge(in);
  const EdgeRecord& e = *graph_.edge(id);
  now_ = graph_.t_last();
  metrics_.edges_processed++;

  // Nothing expires without a window; sweeping also need not outpace the
  // rate at which entries can actually expire, so it is additionally held
  // to a quarter-window cadence in timestamps.
  if (config_.window != kNoWindow &&
      ++edges_since_sweep_ >= config_.sweep_interval &&
      now_ - last_sweep_ >= std::max<Timestamp>(1, config_.window / 4)) {
    edges_since_sweep_ = 0;
    last_sweep_ = now_;
    metrics_.partial_matches_pruned +=
        tree_.prune_expired(now_, config_.window);
  }

  const size_t leaf_count = tree_.leaf_count();
  for (size_t i = 0; i < leaf_count; i++) {
    // Cheap label screen: an edge that cannot bind any edge of this leaf
    // neither matches nor extends a gated-in region.
    if (!edge_fits_leaf(e, i)) continue;
    const SJTreeNode& leaf = tree_.node(tree_.leaf(i));
    if (config_.mode == Execution::Lazy && i > 0) {
      auto [src_budget, src_stamp] = gate_.best_live(e.src, i, now_);
      auto [dst_budget, dst_stamp] = gate_.best_live(e.dst, i, now_);
      if (src_budget < 0 && dst_budget < 0) continue;
      // Keep the enabled region connected for multi-edge leaves: the far
      // endpoint inherits the near endpoint's stamp (so the region
      // expires together with the match that enabled it) minus one hop
      // of budget (so the region never outgrows the leaf diameter).
      if (leaf.edges.size() > 1) {
        std::vector<VertexId> fresh;
        if (src_budget > 0)
          enable_vertex(e.dst, i, static_cast<size_t>(src_budget) - 1,
                        src_stamp, fresh);
        if (dst_budget > 0)
          enable_vertex(e.src, i, static_cast<size_t>(dst_budget) - 1,
                        dst_stamp, fresh);
        for (VertexId v : fresh) backsearch_vertex(i, v, sink);
      }
    }
    metrics_.iso_calls++;
    auto iso_start = Clock::now();
    auto matches =
        subgraph_iso_around_edge(graph_, tree_.query(), leaf.edges, e);
    metrics_.iso_seconds += seconds_since(iso_start);
    for (const Match& m : matches) deliver(i, m, sink);
  }
  metrics_.total_seconds += seconds_since(total_start);
}

}  // namespace sgm
