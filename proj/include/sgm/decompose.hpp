#ifndef SGM_DECOMPOSE_HPP
#define SGM_DECOMPOSE_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sgm/selectivity.hpp"
#include "sgm/sjtree.hpp"

namespace sgm {

enum class Decomposition { Single, Path, Auto };
enum class Execution { Eager, Lazy };

struct Strategy {
  Decomposition decomposition = Decomposition::Auto;
  Execution execution = Execution::Lazy;
};

std::string to_string(Decomposition d);
std::string to_string(Execution e);

// Candidate primitives in ascending selectivity order (unseen edge types
// count as 0 and come first; ties break on the lexical key order).
struct PrimitiveSet {
  std::vector<PrimitiveKey> keys;
};

// Primitives instantiable in `query`, ordered for the greedy builder.
// Path mode lists the query's *seen* 2-edge paths ahead of its edge
// types; fragments whose 2-edge combinations were never observed fall
// back to 1-edge leaves.
PrimitiveSet make_primitive_set(const QueryGraph& query,
                                const SelectivityTable& table,
                                Decomposition mode);

// Residual query during decomposition; original edge/vertex ids persist.
struct ResidualQuery {
  const QueryGraph* query = nullptr;
  std::vector<bool> edge_alive;

  explicit ResidualQuery(const QueryGraph& q)
      : query(&q), edge_alive(q.edges.size(), true) {}
  size_t live_edge_count() const;
  bool vertex_alive(uint32_t v) const;  // has at least one live edge
};

// Removes the edges of `sub`; vertices disappear with their last edge.
void remove_subgraph(ResidualQuery& residual,
                     std::span<const uint32_t> sub_edges);

struct PrimitiveInstance {
  std::vector<uint32_t> edges;  // 1 or 2 residual query edge ids
};

// Concrete instance of `key` in the residual query, incident to the
// frontier when nonempty. Deterministic: lowest edge ids win.
std::optional<PrimitiveInstance> find_primitive_instance(
    const ResidualQuery& residual, const std::set<uint32_t>& frontier,
    const PrimitiveKey& key, const MapConfig& cfg);

struct BuildReport {
  std::vector<std::vector<uint32_t>> leaf_edges;
  bool frontier_fallback = false;  // a global (frontier-free) probe fired
  std::vector<std::string> warnings;
};

// Greedy decomposition: repeatedly instantiate the most selective
// primitive touching the frontier, remove it, append it as a leaf.
BuildReport decompose_query(const QueryGraph& query, const PrimitiveSet& M,
                            const MapConfig& cfg);
SJTree build_sjtree(const QueryGraph& query, const PrimitiveSet& M,
                    const MapConfig& cfg);

struct StrategyReport {
  Strategy chosen;
  double expected_single = 0.0;  // S(T_1)
  double expected_path = 0.0;    // S(T_2)
  double relative = 0.0;         // xi(T_2, T_1)
  bool forced = false;           // unseen edge type forced Path
  std::vector<std::string> warnings;
};

// Builds both candidate trees and applies the relative-selectivity
// threshold (default 0.001): below it, path decomposition wins.
StrategyReport select_strategy(const QueryGraph& query,
                               const SelectivityTable& table,
                               double threshold = 0.001);

struct LeafOrderReport {
  std::vector<uint64_t> leaf_frequencies;
  bool ascending = true;
  bool first_leaf_minimal = true;  // among same-size query primitives
  std::vector<std::string> notes;  // decomposition advisories
};

LeafOrderReport leaf_order_check(const SJTree& tree,
                                 const SelectivityTable& table,
                                 double avg_degree = 0.0);

}  // namespace sgm

#endif
