#ifndef SGM_IO_HPP
#define SGM_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "sgm/graph.hpp"
#include "sgm/query.hpp"
#include "sgm/selectivity.hpp"

namespace sgm {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Edge stream TSV:
//   timestamp \t src \t src_label \t edge_label \t dst \t dst_label
//   [\t k=v;k=v...]
// '#' lines are comments.
std::vector<EdgeInput> read_stream(std::istream& is);
std::vector<EdgeInput> read_stream_file(const std::string& path);
void write_stream(std::ostream& os, const std::vector<EdgeInput>& edges);
void write_stream_file(const std::string& path,
                       const std::vector<EdgeInput>& edges);

// Query files reuse the stream line format (timestamp ignored, '*' is a
// wildcard label) plus a '@window <t_W>' directive.
struct QueryFile {
  QueryGraph query;
  Timestamp window = kNoWindow;
};

QueryFile read_query(std::istream& is);
QueryFile read_query_file(const std::string& path);
void write_query(std::ostream& os, const QueryGraph& q, Timestamp window);
void write_query_file(const std::string& path, const QueryGraph& q,
                      Timestamp window);

// Stats CSV: kind,key,count,selectivity — ascending by count.
void write_stats(std::ostream& os, const SelectivityTable& table);
void write_stats_file(const std::string& path, const SelectivityTable& table);
SelectivityTable read_stats(std::istream& is);
SelectivityTable read_stats_file(const std::string& path);

}  // namespace sgm

#endif
