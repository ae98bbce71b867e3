#ifndef SGM_SJTREE_HPP
#define SGM_SJTREE_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sgm/query.hpp"

namespace sgm {

struct MatchTable {
  std::unordered_map<JoinKey, std::vector<Match>, JoinKeyHash> buckets;
  std::unordered_set<MatchSignature, MatchSignatureHash> signatures;

  size_t size() const { return signatures.size(); }
  bool contains(const Match& m) const {
    return signatures.count(canonical_signature(m)) > 0;
  }
  // Returns false when an identical match is already stored.
  bool insert(const JoinKey& key, const Match& m);
  void clear() {
    buckets.clear();
    signatures.clear();
  }
};

struct SJTreeNode {
  uint32_t id = 0;
  int32_t parent = -1;
  int32_t sibling = -1;
  int32_t left = -1;
  int32_t right = -1;
  int32_t leaf_ordinal = -1;         // leaves only
  std::vector<uint32_t> edges;       // query edge ids, ascending
  std::vector<uint32_t> vertices;    // derived, ascending
  CutSubgraph cut;                   // internal nodes only
  MatchTable table;

  bool is_leaf() const { return left < 0; }
};

// Left-deep binary decomposition tree. Leaves are numbered by join order
// (ordinal 0 = most selective); every right child is a leaf.
class SJTree {
 public:
  SJTree() = default;

  // Assembles the left-deep tree from ordered, edge-disjoint leaf
  // subgraphs covering the query. Throws std::invalid_argument on an
  // empty cut or a coverage violation.
  static SJTree from_leaves(const QueryGraph& query,
                            std::vector<std::vector<uint32_t>> leaf_edges);

  using MatchSink = std::function<void(const Match&)>;
  // Hook fired after a match is newly inserted at a node.
  using InsertHook = std::function<void(uint32_t node_id, const Match&)>;

  // Recursive hash-join update. Probes the sibling table, pushes joins
  // to the parent (or emits at the root), then stores m at node_id.
  // Matches whose span would reach the window are discarded; sibling
  // entries referencing evicted edges (earliest < now - window) are
  // dropped lazily during the probe.
  void update(uint32_t node_id, const Match& m, Timestamp now,
              Timestamp window, const MatchSink& emit,
              const InsertHook& on_insert = nullptr);

  // Removes every stored match whose earliest edge is older than
  // now - window. Returns the number removed.
  size_t prune_expired(Timestamp now, Timestamp window);

  std::vector<size_t> table_sizes() const;
  // Space estimate: sum over nodes of |E(subgraph)| * stored match count.
  size_t space_estimate() const;

  const SJTreeNode& node(uint32_t id) const { return nodes_.at(id); }
  SJTreeNode& node(uint32_t id) { return nodes_.at(id); }
  size_t node_count() const { return nodes_.size(); }
  uint32_t root() const { return root_; }
  size_t leaf_count() const { return leaves_.size(); }
  uint32_t leaf(size_t ordinal) const { return leaves_.at(ordinal); }
  const std::vector<uint32_t>& leaves() const { return leaves_; }
  const QueryGraph& query() const { return query_; }

  // One line per node, ordered by node id:
  //   node <id> parent=<id|-> sibling=<id|-> leaf=<ordinal|->
  //        edges=<list> cut=<list>
  void serialize(std::ostream& os) const;
  static SJTree parse(std::istream& is, const QueryGraph& query);

 private:
  std::vector<SJTreeNode> nodes_;
  uint32_t root_ = 0;
  std::vector<uint32_t> leaves_;  // node id per leaf ordinal
  QueryGraph query_;
};

std::vector<uint32_t> subgraph_vertices(const QueryGraph& q,
                                        std::span<const uint32_t> edge_ids);

}  // namespace sgm

#endif
