#ifndef SGM_ENGINE_HPP
#define SGM_ENGINE_HPP

#include <array>
#include <chrono>
#include <cstdint>
#include <limits>
#include <utility>
#include <functional>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sgm/decompose.hpp"
#include "sgm/graph.hpp"
#include "sgm/query.hpp"
#include "sgm/sjtree.hpp"

namespace sgm {

// Per-vertex, per-leaf-ordinal enable stamps gating lazy search. Leaf 0
// is implicit: it is searched everywhere.
//
// Two mechanisms keep the gated-in region small instead of letting it
// flood the graph over time:
//  - A stamp only gates a vertex in while it is younger than the window.
//    The partial match that set it cannot outlive the window either, so
//    letting the stamp lapse keeps the region proportional to the live
//    partial matches. A vertex whose stamp lapsed and is enabled again
//    counts as fresh and is back-searched again.
//  - Every stamp carries a hop budget: how many more edges a leaf
//    instance may extend beyond this vertex. Enabling a cut vertex for a
//    k-edge leaf grants budget k-1; each hop away spends one. A vertex
//    with budget 0 still gates edges in but grants nothing further, so a
//    region never grows past the leaf diameter around the match that
//    enabled it.
// stamp[b] holds the latest stamp granted with budget >= b, so
// stamp[0] >= stamp[1] >= stamp[2] always.
struct SearchGate {
  static constexpr Timestamp kNever = std::numeric_limits<Timestamp>::min() / 2;
  static constexpr size_t kMaxBudget = 2;  // leaves have at most 3 edges

  using Levels = std::array<Timestamp, kMaxBudget + 1>;

  Timestamp window = kNoWindow;
  std::unordered_map<VertexId, std::vector<Levels>> stamps;

  struct EnableResult {
    bool fresh = false;     // flipped from gated-out to gated-in at `now`
    bool advanced = false;  // the stamp at the granted budget moved forward
  };

  bool enabled(VertexId v, size_t ordinal, Timestamp now) const {
    if (ordinal == 0) return true;
    const Levels* lv = find(v, ordinal);
    return lv != nullptr && (*lv)[0] >= now - window;
  }

  EnableResult enable(VertexId v, size_t ordinal, size_t budget,
                      Timestamp stamp, Timestamp now) {
    auto& slots = stamps[v];
    if (slots.size() <= ordinal)
      slots.resize(ordinal + 1, Levels{kNever, kNever, kNever});
    Levels& lv = slots[ordinal];
    EnableResult r;
    r.fresh = lv[0] < now - window && stamp >= now - window;
    r.advanced = stamp > lv[budget];
    for (size_t b = 0; b <= budget; b++)
      if (stamp > lv[b]) lv[b] = stamp;
    return r;
  }

  // Highest budget with a still-valid stamp and that stamp; budget is
  // negative when the vertex is gated out.
  std::pair<int, Timestamp> best_live(VertexId v, size_t ordinal,
                                      Timestamp now) const {
    const Levels* lv = find(v, ordinal);
    if (lv)
      for (size_t b = kMaxBudget + 1; b-- > 0;)
        if ((*lv)[b] >= now - window) return {static_cast<int>(b), (*lv)[b]};
    return {-1, kNever};
  }

 private:
  const Levels* find(VertexId v, size_t ordinal) const {
    auto it = stamps.find(v);
    if (it == stamps.end() || ordinal >= it->second.size()) return nullptr;
    return &it->second[ordinal];
  }
};

struct EngineConfig {
  Execution mode = Execution::Eager;
  Timestamp window = kNoWindow;
  bool dedupe = true;
  uint64_t sweep_interval = 4096;  // prune_expired cadence, in edges
};

struct MatchEvent {
  Match match;
  Timestamp emitted_at = 0;
};

struct EngineMetrics {
  uint64_t edges_processed = 0;
  uint64_t iso_calls = 0;
  uint64_t matches_emitted = 0;
  uint64_t backsearch_calls = 0;
  uint64_t partial_matches_pruned = 0;
  double iso_seconds = 0.0;
  double update_seconds = 0.0;
  double total_seconds = 0.0;

  double iso_fraction() const {
    return total_seconds > 0.0 ? iso_seconds / total_seconds : 0.0;
  }
  double update_fraction() const {
    return total_seconds > 0.0 ? update_seconds / total_seconds : 0.0;
  }
};

// Primitive matchers (1-edge, 2-edge, triad). All matches of the query
// subgraph `edge_ids` that contain data edge `e`; vertex- and
// edge-injective, deduplicated, any deterministic order.
std::vector<Match> subgraph_iso_around_edge(const DynamicGraph& g,
                                            const QueryGraph& q,
                                            std::span<const uint32_t> edge_ids,
                                            const EdgeRecord& e);
// Variant anchored at a vertex: matches whose image contains `anchor`.
std::vector<Match> subgraph_iso_around_vertex(
    const DynamicGraph& g, const QueryGraph& q,
    std::span<const uint32_t> edge_ids, VertexId anchor);

// One registered query over one stream: ingestion, leaf search, hash
// join and emission, strictly sequential.
class Engine {
 public:
  using EventSink = std::function<void(const MatchEvent&)>;

  Engine(SJTree tree, EngineConfig config);

  // Ingests one edge and reports every new complete match to the sink.
  void process_edge(const EdgeInput& in, const EventSink& sink);

  const DynamicGraph& graph() const { return graph_; }
  const SJTree& tree() const { return tree_; }
  const EngineMetrics& metrics() const { return metrics_; }
  const EngineConfig& config() const { return config_; }
  std::vector<size_t> table_sizes() const { return tree_.table_sizes(); }

 private:
  void deliver(size_t ordinal, const Match& m, const EventSink& sink);
  void emit(const Match& m, const EventSink& sink);
  void on_insert(uint32_t node_id, const Match& m, const EventSink& sink);
  void enable_and_backsearch(size_t next_ordinal, uint32_t node_id,
                             const Match& m, const EventSink& sink);
  void enable_vertex(VertexId v, size_t ordinal, size_t budget,
                     Timestamp stamp, std::vector<VertexId>& fresh);
  void backsearch_vertex(size_t ordinal, VertexId v, const EventSink& sink);
  bool edge_fits_leaf(const EdgeRecord& e, size_t ordinal) const;

  SJTree tree_;
  EngineConfig config_;
  DynamicGraph graph_;
  SearchGate gate_;
  std::unordered_set<MatchSignature, MatchSignatureHash> emitted_;
  EngineMetrics metrics_;
  uint64_t edges_since_sweep_ = 0;
  Timestamp last_sweep_ = std::numeric_limits<Timestamp>::min() / 2;
  Timestamp now_ = 0;
  bool in_update_ = false;
};

}  // namespace sgm

#endif
