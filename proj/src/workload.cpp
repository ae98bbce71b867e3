#include "sgm/workload.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "sgm/decompose.hpp"

namespace sgm {

namespace {

// Deterministic weighted pick (avoids std::discrete_distribution, whose
// output is not pinned by the standard).
size_t weighted_pick(const std::vector<double>& cumulative,
                     std::mt19937_64& rng) {
  double total = cumulative.back();
  double x = (static_cast<double>(rng() >> 11) / 9007199254740992.0) * total;
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
  return std::min<size_t>(static_cast<size_t>(it - cumulative.begin()),
                          cumulative.size() - 1);
}

std::vector<double> cumulative_weights(const StreamSpec& spec) {
  std::vector<double> weights;
  if (!spec.explicit_weights.empty()) {
    weights = spec.explicit_weights;
  } else {
    for (size_t r = 1; r <= spec.labels.size(); r++) {
      weights.push_back(spec.label_exponent == 0.0
                            ? 1.0
                            : std::pow(static_cast<double>(r),
                                       -spec.label_exponent));
    }
  }
  if (weights.size() != spec.labels.size())
    throw std::invalid_argument("label/weight count mismatch");
  std::vector<double> cum;
  double acc = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("negative label weight");
    acc += w;
    cum.push_back(acc);
  }
  if (acc <= 0.0) throw std::invalid_argument("label weights sum to zero");
  return cum;
}

}  // namespace

std::vector<EdgeInput> generate_stream(const StreamSpec& spec) {
  if (spec.vertex_count < 2)
    throw std::invalid_argument("stream needs at least 2 vertices");
  if (spec.labels.empty())
    throw std::invalid_argument("stream needs at least one edge label");
  std::mt19937_64 rng(spec.seed);
  std::vector<double> cum = cumulative_weights(spec);

  std::vector<EdgeInput> out;
  out.reserve(spec.edge_count);
  // Endpoint pool for preferential attachment: every endpoint ever used.
  std::vector<uint64_t> pool;

  auto uniform_vertex = [&]() { return rng() % spec.vertex_count; };
  auto pick_vertex = [&]() -> uint64_t {
    if (spec.attachment == AttachmentModel::Preferential && !pool.empty() &&
        rng() % 2 == 0)
      return pool[rng() % pool.size()];
    return uniform_vertex();
  };

  for (uint64_t i = 0; i < spec.edge_count; i++) {
    uint64_t src = pick_vertex();
    uint64_t dst = pick_vertex();
    if (!spec.allow_self_loops) {
      while (dst == src) dst = uniform_vertex();
    }
    EdgeInput e;
    e.timestamp = static_cast<Timestamp>(i) * spec.timestamp_stride;
    e.src = "v" + std::to_string(src);
    e.dst = "v" + std::to_string(dst);
    e.src_label = spec.vertex_label;
    e.dst_label = spec.vertex_label;
    e.label = spec.labels[weighted_pick(cum, rng)];
    out.push_back(std::move(e));
    if (spec.attachment == AttachmentModel::Preferential) {
      pool.push_back(src);
      pool.push_back(dst);
    }
  }
  return out;
}

QueryGraph generate_query(const QuerySpec& spec, std::mt19937_64& rng) {
  if (spec.labels.empty())
    throw std::invalid_argument("query generation needs an edge alphabet");
  if (spec.size == 0) throw std::invalid_argument("query needs edges");
  QueryGraph q;
  auto label = [&]() { return spec.labels[rng() % spec.labels.size()]; };

  switch (spec.shape) {
    case QueryShape::Path: {
      uint32_t prev = q.add_vertex(spec.vertex_label);
      for (uint32_t i = 0; i < spec.size; i++) {
        uint32_t next = q.add_vertex(spec.vertex_label);
        q.add_edge(prev, next, label());
        prev = next;
      }
      break;
    }
    case QueryShape::BinaryTree: {
      q.add_vertex(spec.vertex_label);
      for (uint32_t i = 0; i < spec.size; i++) {
        // Attach below a vertex that still has fewer than 2 children.
        std::vector<uint32_t> open;
        std::vector<uint32_t> child_count(q.vertices.size(), 0);
        for (const QueryEdge& e : q.edges) child_count[e.src]++;
        for (uint32_t v = 0; v < q.vertices.size(); v++)
          if (child_count[v] < 2) open.push_back(v);
        uint32_t parent = open[rng() % open.size()];
        uint32_t child = q.add_vertex(spec.vertex_label);
        q.add_edge(parent, child, label());
      }
      break;
    }
    case QueryShape::NaryTree: {
      q.add_vertex(spec.vertex_label);
      for (uint32_t i = 0; i < spec.size; i++) {
        uint32_t parent = static_cast<uint32_t>(rng() % q.vertices.size());
        uint32_t child = q.add_vertex(spec.vertex_label);
        q.add_edge(parent, child, label());
      }
      break;
    }
  }
  return q;
}

bool all_paths_seen(const QueryGraph& query, const SelectivityTable& table) {
  for (uint32_t v = 0; v < query.vertices.size(); v++) {
    for (uint32_t e1 = 0; e1 < query.edges.size(); e1++) {
      if (query.edges[e1].src != v && query.edges[e1].dst != v) continue;
      for (uint32_t e2 = e1 + 1; e2 < query.edges.size(); e2++) {
        if (query.edges[e2].src != v && query.edges[e2].dst != v) continue;
        uint32_t pair[2] = {e1, e2};
        auto key = primitive_key_for(query, pair, table.config);
        if (key && table.count(*key) == 0) return false;
      }
    }
  }
  return true;
}

GeneratedQueries generate_queries(const QuerySpec& spec,
                                  const SelectivityTable& table, size_t n,
                                  size_t candidate_pool) {
  GeneratedQueries out;
  std::mt19937_64 rng(spec.seed);

  struct Survivor {
    QueryGraph query;
    double expected;
  };
  std::vector<Survivor> survivors;
  std::set<std::string> dedupe;
  for (size_t i = 0; i < candidate_pool; i++) {
    QueryGraph q = generate_query(spec, rng);
    out.candidates++;
    if (!all_paths_seen(q, table)) {
      out.filtered_unseen++;
      continue;
    }
    double expected;
    try {
      SJTree t2 = build_sjtree(
          q, make_primitive_set(q, table, Decomposition::Path), table.config);
      expected = expected_selectivity(t2, table);
    } catch (const std::exception&) {
      continue;  // not decomposable under the sampled statistics
    }
    // Duplicate shapes with identical labels add nothing to a sweep.
    std::string fingerprint;
    for (const QueryEdge& e : q.edges)
      fingerprint += std::to_string(e.src) + ">" + std::to_string(e.dst) +
                     ":" + e.label + ";";
    if (!dedupe.insert(fingerprint).second) continue;
    survivors.push_back({std::move(q), expected});
  }

  if (survivors.empty()) {
    out.warnings.push_back("no candidate query survived the filters");
    return out;
  }

  // Log-decade bins over expected selectivity, sampled round-robin.
  std::map<int, std::vector<size_t>> bins;
  for (size_t i = 0; i < survivors.size(); i++) {
    int bin = survivors[i].expected > 0.0
                  ? static_cast<int>(std::floor(
                        std::log10(survivors[i].expected)))
                  : -99;
    bins[bin].push_back(i);
  }
  std::vector<size_t> picked;
  size_t round = 0;
  while (picked.size() < n) {
    bool any = false;
    for (auto& [bin, members] : bins) {
      if (round < members.size() && picked.size() < n) {
        picked.push_back(members[round]);
        any = true;
      }
    }
    if (!any) break;
    round++;
  }
  if (picked.size() < n)
    out.warnings.push_back("only " + std::to_string(picked.size()) + " of " +
                           std::to_string(n) + " requested queries available");
  for (size_t idx : picked) out.queries.push_back(survivors[idx].query);
  return out;
}

}  // namespace sgm
