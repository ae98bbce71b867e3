#ifndef SGM_ORACLE_HPP
#define SGM_ORACLE_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sgm/engine.hpp"
#include "sgm/graph.hpp"
#include "sgm/query.hpp"

namespace sgm {

// Every vertex- and edge-injective, label-consistent embedding of the
// query into the live window with span < window. When `containing` is
// set, only matches using that data edge are returned. Independent of
// the incremental engine: plain backtracking enumeration.
std::vector<Match> enumerate_all_matches(
    const DynamicGraph& g, const QueryGraph& query, Timestamp window,
    std::optional<EdgeId> containing = std::nullopt);

std::set<MatchSignature> match_signatures(const std::vector<Match>& ms);

struct DiffReport {
  bool passed = true;
  size_t edges_checked = 0;
  size_t total_matches = 0;
  // First divergence, when !passed.
  size_t edge_index = 0;
  Timestamp edge_timestamp = 0;
  std::vector<MatchSignature> missing;   // oracle-only
  std::vector<MatchSignature> spurious;  // engine-only
  std::string describe() const;
};

// Replays the stream; after each edge compares the engine's emissions
// with the oracle's matches containing that edge. Stops at the first
// divergence.
DiffReport incremental_diff_check(const std::vector<EdgeInput>& stream,
                                  const SJTree& tree, EngineConfig config);

}  // namespace sgm

#endif
