#ifndef SGM_WORKLOAD_HPP
#define SGM_WORKLOAD_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sgm/graph.hpp"
#include "sgm/query.hpp"
#include "sgm/selectivity.hpp"

namespace sgm {

enum class AttachmentModel { Uniform, Preferential };

struct StreamSpec {
  uint64_t vertex_count = 1000;
  uint64_t edge_count = 10000;
  std::vector<std::string> labels = {"a", "b"};
  // Power-law rank weights w_r = r^-exponent; ignored when
  // explicit_weights is nonempty.
  double label_exponent = 0.0;  // 0 = uniform
  std::vector<double> explicit_weights;
  Timestamp timestamp_stride = 1;
  AttachmentModel attachment = AttachmentModel::Uniform;
  std::string vertex_label = "v";
  bool allow_self_loops = false;
  uint64_t seed = 1;
};

std::vector<EdgeInput> generate_stream(const StreamSpec& spec);

enum class QueryShape { Path, BinaryTree, NaryTree };

struct QuerySpec {
  QueryShape shape = QueryShape::Path;
  uint32_t size = 3;  // edges
  std::vector<std::string> labels;
  std::string vertex_label = "*";
  uint64_t seed = 1;
};

QueryGraph generate_query(const QuerySpec& spec, std::mt19937_64& rng);

struct GeneratedQueries {
  std::vector<QueryGraph> queries;
  size_t candidates = 0;
  size_t filtered_unseen = 0;  // dropped for containing an unseen 2-edge path
  std::vector<std::string> warnings;
};

// Generates candidates, drops those containing 2-edge paths absent from
// the table, bins survivors by expected selectivity (log-decade bins)
// and samples near-uniformly across bins.
GeneratedQueries generate_queries(const QuerySpec& spec,
                                  const SelectivityTable& table, size_t n,
                                  size_t candidate_pool = 200);

// True when every 2-edge path of the query appears in the table.
bool all_paths_seen(const QueryGraph& query, const SelectivityTable& table);

}  // namespace sgm

#endif
