#include "sgm/sjtree.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sgm {

std::vector<uint32_t> subgraph_vertices(const QueryGraph& q,
                                        std::span<const uint32_t> edge_ids) {
  std::vector<uint32_t> verts;
  for (uint32_t eid : edge_ids) {
    verts.push_back(q.edges.at(eid).src);
    verts.push_back(q.edges.at(eid).dst);
  }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  return verts;
}

bool MatchTable::insert(const JoinKey& key, const Match& m) {
  if (!signatures.insert(canonical_signature(m)).second) return false;
  buckets[key].push_back(m);
  return true;
}

namespace {

std::vector<uint32_t> sorted_intersection(const std::vector<uint32_t>& a,
                                          const std::vector<uint32_t>& b) {
  std::vector<uint32_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

}  // namespace

SJTree SJTree::from_leaves(const QueryGraph& query,
                           std::vector<std::vector<uint32_t>> leaf_edges) {
  if (leaf_edges.empty())
    throw std::invalid_argument("SJ-Tree needs at least one leaf");

  // Coverage check: leaves edge-disjoint, union = query.
  std::vector<bool> covered(query.edges.size(), false);
  for (const auto& edges : leaf_edges) {
    for (uint32_t eid : edges) {
      if (eid >= query.edges.size())
        throw std::invalid_argument("leaf references unknown query edge");
      if (covered[eid])
        throw std::invalid_argument("leaves are not edge-disjoint");
      covered[eid] = true;
    }
  }
  if (!std::all_of(covered.begin(), covered.end(), [](bool b) { return b; }))
    throw std::invalid_argument("leaves do not cover the query graph");

  SJTree tree;
  tree.query_ = query;

  auto add_leaf = [&](std::vector<uint32_t> edges, int32_t ordinal) {
    SJTreeNode n;
    n.id = static_cast<uint32_t>(tree.nodes_.size());
    std::sort(edges.begin(), edges.end());
    n.vertices = subgraph_vertices(query, edges);
    n.edges = std::move(edges);
    n.leaf_ordinal = ordinal;
    tree.nodes_.push_back(std::move(n));
    return tree.nodes_.back().id;
  };

  uint32_t acc = add_leaf(std::move(leaf_edges[0]), 0);
  tree.leaves_.push_back(acc);
  for (size_t i = 1; i < leaf_edges.size(); i++) {
    uint32_t right = add_leaf(std::move(leaf_edges[i]),
                              static_cast<int32_t>(i));
    tree.leaves_.push_back(right);

    SJTreeNode parent;
    parent.id = static_cast<uint32_t>(tree.nodes_.size());
    const SJTreeNode& l = tree.nodes_[acc];
    const SJTreeNode& r = tree.nodes_[right];
    parent.edges = l.edges;
    parent.edges.insert(parent.edges.end(), r.edges.begin(), r.edges.end());
    std::sort(parent.edges.begin(), parent.edges.end());
    parent.vertices = subgraph_vertices(query, parent.edges);
    parent.cut.vertices = sorted_intersection(l.vertices, r.vertices);
    parent.cut.edges = sorted_intersection(l.edges, r.edges);
    if (parent.cut.empty())
      throw std::invalid_argument(
          "empty cut between accumulated subtree and leaf " +
          std::to_string(i));
    parent.left = static_cast<int32_t>(acc);
    parent.right = static_cast<int32_t>(right);
    tree.nodes_.push_back(std::move(parent));

    uint32_t pid = static_cast<uint32_t>(tree.nodes_.size() - 1);
    tree.nodes_[acc].parent = static_cast<int32_t>(pid);
    tree.nodes_[acc].sibling = static_cast<int32_t>(right);
    tree.nodes_[right].parent = static_cast<int32_t>(pid);
    tree.nodes_[right].sibling = static_cast<int32_t>(acc);
    acc = pid;
  }
  tree.root_ = acc;

  // Property check: the root covers the whole query.
  if (tree.nodes_[tree.root_].edges.size() != query.edges.size())
    throw std::invalid_argument("root subgraph does not equal the query");
  return tree;
}

void SJTree::update(uint32_t node_id, const Match& m, Timestamp now,
                    Timestamp window, const MatchSink& emit,
                    const InsertHook& on_insert) {
  SJTreeNode& n = nodes_.at(node_id);
  if (node_id == root_)
    throw std::logic_error("update_sjtree called on the root");
  if (match_span(m) >= window) return;

  SJTreeNode& parent = nodes_.at(static_cast<uint32_t>(n.parent));
  SJTreeNode& sibling = nodes_.at(static_cast<uint32_t>(n.sibling));
  const JoinKey key = project(m, parent.cut);

  // Idempotent insertion: a rediscovered match triggers no re-probe.
  if (n.table.contains(m)) return;

  // Probe the sibling, dropping entries that reference evicted edges.
  std::vector<Match> partners;
  auto bucket = sibling.table.buckets.find(key);
  if (bucket != sibling.table.buckets.end()) {
    auto& entries = bucket->second;
    std::erase_if(entries, [&](const Match& s) {
      if (s.earliest >= now - window) return false;
      sibling.table.signatures.erase(canonical_signature(s));
      return true;
    });
    partners = entries;  // copy: recursion below may touch tables
  }

  for (const Match& s : partners) {
    auto joined = join_matches(s, m);
    if (!joined) continue;
    if (match_span(*joined) >= window) continue;
    if (n.parent == static_cast<int32_t>(root_)) {
      emit(*joined);
    } else {
      update(static_cast<uint32_t>(n.parent), *joined, now, window, emit,
             on_insert);
    }
  }

  if (n.table.insert(key, m) && on_insert) on_insert(node_id, m);
}

size_t SJTree::prune_expired(Timestamp now, Timestamp window) {
  const Timestamp cutoff = now - window;
  size_t removed = 0;
  for (SJTreeNode& n : nodes_) {
    for (auto it = n.table.buckets.begin(); it != n.table.buckets.end();) {
      auto& entries = it->second;
      removed += std::erase_if(entries, [&](const Match& m) {
        if (m.earliest >= cutoff) return false;
        n.table.signatures.erase(canonical_signature(m));
        return true;
      });
      if (entries.empty())
        it = n.table.buckets.erase(it);
      else
        ++it;
    }
  }
  return removed;
}

std::vector<size_t> SJTree::table_sizes() const {
  std::vector<size_t> sizes;
  sizes.reserve(nodes_.size());
  for (const SJTreeNode& n : nodes_) sizes.push_back(n.table.size());
  return sizes;
}

size_t SJTree::space_estimate() const {
  size_t total = 0;
  for (const SJTreeNode& n : nodes_) total += n.edges.size() * n.table.size();
  return total;
}

namespace {

void write_list(std::ostream& os, const std::vector<uint32_t>& v) {
  for (size_t i = 0; i < v.size(); i++) {
    if (i) os << ',';
    os << v[i];
  }
}

std::vector<uint32_t> parse_list(const std::string& s) {
  std::vector<uint32_t> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    out.push_back(static_cast<uint32_t>(std::stoul(tok)));
  return out;
}

std::string field_value(const std::string& field) {
  auto pos = field.find('=');
  return pos == std::string::npos ? std::string() : field.substr(pos + 1);
}

}  // namespace

void SJTree::serialize(std::ostream& os) const {
  for (const SJTreeNode& n : nodes_) {
    os << "node " << n.id;
    os << " parent=";
    if (n.parent < 0)
      os << '-';
    else
      os << n.parent;
    os << " sibling=";
    if (n.sibling < 0)
      os << '-';
    else
      os << n.sibling;
    os << " leaf=";
    if (n.leaf_ordinal < 0)
      os << '-';
    else
      os << n.leaf_ordinal;
    os << " edges=";
    write_list(os, n.edges);
    os << " cut=";
    write_list(os, n.cut.vertices);
    os << '\n';
  }
}

SJTree SJTree::parse(std::istream& is, const QueryGraph& query) {
  // Rebuild from leaf subgraphs in ordinal order; structural fields in
  // the file are validated against the reconstruction.
  std::vector<std::pair<int32_t, std::vector<uint32_t>>> leaves;
  std::string line;
  size_t node_lines = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string word, parent, sibling, leaf, edges, cut;
    uint32_t id;
    if (!(ss >> word >> id >> parent >> sibling >> leaf >> edges >> cut) ||
        word != "node")
      throw std::invalid_argument("bad SJ-Tree line: " + line);
    node_lines++;
    std::string ordinal = field_value(leaf);
    if (ordinal == "-") continue;
    leaves.emplace_back(std::stoi(ordinal), parse_list(field_value(edges)));
  }
  std::sort(leaves.begin(), leaves.end());
  std::vector<std::vector<uint32_t>> leaf_edges;
  for (auto& [ord, edges] : leaves) leaf_edges.push_back(std::move(edges));
  SJTree tree = from_leaves(query, std::move(leaf_edges));
  if (tree.node_count() != node_lines)
    throw std::invalid_argument("SJ-Tree node count mismatch");
  return tree;
}

}  // namespace sgm
