#include "sgm/oracle.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace sgm {

namespace {

// BFS edge order from a seed edge so each step has a mapped endpoint.
std::vector<uint32_t> connectivity_order(const QueryGraph& q, uint32_t seed) {
  std::vector<uint32_t> order{seed};
  std::vector<bool> placed(q.edges.size(), false);
  std::vector<bool> touched(q.vertices.size(), false);
  placed[seed] = true;
  touched[q.edges[seed].src] = true;
  touched[q.edges[seed].dst] = true;
  while (order.size() < q.edges.size()) {
    bool progress = false;
    for (uint32_t e = 0; e < q.edges.size(); e++) {
      if (placed[e]) continue;
      if (!touched[q.edges[e].src] && !touched[q.edges[e].dst]) continue;
      placed[e] = true;
      touched[q.edges[e].src] = true;
      touched[q.edges[e].dst] = true;
      order.push_back(e);
      progress = true;
    }
    if (!progress) throw std::logic_error("query graph is disconnected");
  }
  return order;
}

struct OracleSearch {
  const DynamicGraph& g;
  const QueryGraph& q;
  Timestamp window;
  std::set<MatchSignature> seen;
  std::vector<Match> results;

  bool consistent(const QueryEdge& qe, const EdgeRecord& e) const {
    return label_matches(qe.label, e.label) &&
           label_matches(q.vertices[qe.src].label, g.vertex(e.src).label) &&
           label_matches(q.vertices[qe.dst].label, g.vertex(e.dst).label);
  }

  void backtrack(const Match& partial, const std::vector<uint32_t>& order,
                 size_t depth) {
    if (match_span(partial) >= window) return;
    if (depth == order.size()) {
      if (seen.insert(canonical_signature(partial)).second)
        results.push_back(partial);
      return;
    }
    uint32_t qeid = order[depth];
    const QueryEdge& qe = q.edges[qeid];
    auto attempt = [&](const EdgeRecord& e) {
      if (!consistent(qe, e)) return;
      Match next = partial;
      if (next.bind_edge(qeid, qe, e)) backtrack(next, order, depth + 1);
    };
    if (auto src = partial.image(qe.src)) {
      g.for_each_incident(*src, Direction::Out, attempt);
    } else if (auto dst = partial.image(qe.dst)) {
      g.for_each_incident(*dst, Direction::In, attempt);
    } else {
      g.for_each_edge([&](const EdgeRecord& e) { attempt(e); });
    }
  }
};

}  // namespace

std::vector<Match> enumerate_all_matches(const DynamicGraph& g,
                                         const QueryGraph& query,
                                         Timestamp window,
                                         std::optional<EdgeId> containing) {
  if (query.edges.empty()) return {};
  OracleSearch search{g, query, window};

  if (containing) {
    const EdgeRecord* e = g.edge(*containing);
    if (!e) return {};
    // The fixed edge may play any query-edge role.
    for (uint32_t qeid = 0; qeid < query.edges.size(); qeid++) {
      const QueryEdge& qe = query.edges[qeid];
      if (!search.consistent(qe, *e)) continue;
      Match seed;
      if (!seed.bind_edge(qeid, qe, *e)) continue;
      search.backtrack(seed, connectivity_order(query, qeid), 1);
    }
    return std::move(search.results);
  }

  // Seed with the query edge whose label is rarest in the window
  // (candidate-ordering heuristic; the result set does not depend on it).
  std::map<std::string, size_t> label_freq;
  g.for_each_edge([&](const EdgeRecord& e) { label_freq[e.label]++; });
  uint32_t seed_edge = 0;
  size_t best = SIZE_MAX;
  for (uint32_t e = 0; e < query.edges.size(); e++) {
    const std::string& lbl = query.edges[e].label;
    size_t freq = lbl == kWildcard ? g.live_edge_count()
                                   : (label_freq.count(lbl) ? label_freq[lbl]
                                                            : 0);
    if (freq < best) {
      best = freq;
      seed_edge = e;
    }
  }
  auto order = connectivity_order(query, seed_edge);
  Match empty;
  const QueryEdge& qe = query.edges[seed_edge];
  g.for_each_edge([&](const EdgeRecord& e) {
    if (!search.consistent(qe, e)) return;
    Match seed;
    if (seed.bind_edge(seed_edge, qe, e)) search.backtrack(seed, order, 1);
  });
  return std::move(search.results);
}

std::set<MatchSignature> match_signatures(const std::vector<Match>& ms) {
  std::set<MatchSignature> out;
  for (const Match& m : ms) out.insert(canonical_signature(m));
  return out;
}

std::string DiffReport::describe() const {
  std::ostringstream os;
  if (passed) {
    os << "pass: " << edges_checked << " edges, " << total_matches
       << " matches";
    return os.str();
  }
  os << "divergence at edge index " << edge_index << " (t=" << edge_timestamp
     << "): " << missing.size() << " missing, " << spurious.size()
     << " spurious\n";
  auto dump = [&os](const char* tag, const std::vector<MatchSignature>& sigs) {
    for (const auto& sig : sigs) {
      os << "  " << tag << " {";
      for (size_t i = 0; i < sig.size(); i++) {
        if (i) os << ", ";
        os << "q" << sig[i].first << "->d" << sig[i].second;
      }
      os << "}\n";
    }
  };
  dump("missing ", missing);
  dump("spurious", spurious);
  return os.str();
}

DiffReport incremental_diff_check(const std::vector<EdgeInput>& stream,
                                  const SJTree& tree, EngineConfig config) {
  DiffReport report;
  Engine engine(tree, config);
  DynamicGraph shadow(config.window);  // oracle's own copy of the window

  for (size_t i = 0; i < stream.size(); i++) {
    std::vector<Match> emitted;
    engine.process_edge(stream[i],
                        [&](const MatchEvent& ev) { emitted.push_back(ev.match); });
    EdgeId id = shadow.add_edge(stream[i]);
    auto expected = match_signatures(
        enumerate_all_matches(shadow, tree.query(), config.window, id));
    auto actual = match_signatures(emitted);
    report.edges_checked++;
    report.total_matches += expected.size();
    if (expected == actual) continue;

    report.passed = false;
    report.edge_index = i;
    report.edge_timestamp = stream[i].timestamp;
    std::set_difference(expected.begin(), expected.end(), actual.begin(),
                        actual.end(), std::back_inserter(report.missing));
    std::set_difference(actual.begin(), actual.end(), expected.begin(),
                        expected.end(), std::back_inserter(report.spurious));
    return report;
  }
  return report;
}

}  // namespace sgm
