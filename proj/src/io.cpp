#include "sgm/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace sgm {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  return out;
}

EdgeInput parse_edge_line(const std::string& line, size_t lineno) {
  std::vector<std::string> f = split(line, '\t');
  if (f.size() < 6)
    throw ParseError("line " + std::to_string(lineno) +
                     ": expected at least 6 tab-separated fields");
  EdgeInput e;
  try {
    e.timestamp = std::stoll(f[0]);
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(lineno) + ": bad timestamp '" +
                     f[0] + "'");
  }
  if (e.timestamp < 0)
    throw ParseError("line " + std::to_string(lineno) +
                     ": negative timestamp");
  e.src = f[1];
  e.src_label = f[2];
  e.label = f[3];
  e.dst = f[4];
  e.dst_label = f[5];
  if (f.size() > 6 && !f[6].empty()) {
    for (const std::string& kv : split(f[6], ';')) {
      auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw ParseError("line " + std::to_string(lineno) +
                         ": bad attribute '" + kv + "'");
      e.attributes.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
    }
  }
  return e;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open " + path);
  return is;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ParseError("cannot write " + path);
  return os;
}

}  // namespace

std::vector<EdgeInput> read_stream(std::istream& is) {
  std::vector<EdgeInput> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(is, line)) {
    lineno++;
    if (line.empty() || line[0] == '#') continue;
    out.push_back(parse_edge_line(line, lineno));
  }
  return out;
}

std::vector<EdgeInput> read_stream_file(const std::string& path) {
  auto is = open_in(path);
  return read_stream(is);
}

void write_stream(std::ostream& os, const std::vector<EdgeInput>& edges) {
  for (const EdgeInput& e : edges) {
    os << e.timestamp << '\t' << e.src << '\t' << e.src_label << '\t'
       << e.label << '\t' << e.dst << '\t' << e.dst_label;
    if (!e.attributes.empty()) {
      os << '\t';
      for (size_t i = 0; i < e.attributes.size(); i++) {
        if (i) os << ';';
        os << e.attributes[i].first << '=' << e.attributes[i].second;
      }
    }
    os << '\n';
  }
}

void write_stream_file(const std::string& path,
                       const std::vector<EdgeInput>& edges) {
  auto os = open_out(path);
  write_stream(os, edges);
}

QueryFile read_query(std::istream& is) {
  QueryFile out;
  std::map<std::string, uint32_t> vertex_ids;
  std::string line;
  size_t lineno = 0;
  auto intern = [&](const std::string& name, const std::string& label) {
    auto it = vertex_ids.find(name);
    if (it != vertex_ids.end()) return it->second;
    uint32_t id = out.query.add_vertex(label);
    vertex_ids.emplace(name, id);
    return id;
  };
  while (std::getline(is, line)) {
    lineno++;
    if (line.empty() || line[0] == '#') continue;
    if (line[0] == '@') {
      std::stringstream ss(line);
      std::string directive;
      ss >> directive;
      if (directive == "@window") {
        long long w;
        if (!(ss >> w) || w <= 0)
          throw ParseError("line " + std::to_string(lineno) +
                           ": bad @window value");
        out.window = w;
      } else {
        throw ParseError("line " + std::to_string(lineno) +
                         ": unknown directive " + directive);
      }
      continue;
    }
    EdgeInput e = parse_edge_line(line, lineno);
    uint32_t src = intern(e.src, e.src_label);
    uint32_t dst = intern(e.dst, e.dst_label);
    out.query.add_edge(src, dst, e.label);
  }
  if (out.query.edges.empty()) throw ParseError("query file has no edges");
  if (!out.query.connected()) throw ParseError("query graph is disconnected");
  return out;
}

QueryFile read_query_file(const std::string& path) {
  auto is = open_in(path);
  return read_query(is);
}

void write_query(std::ostream& os, const QueryGraph& q, Timestamp window) {
  if (window != kNoWindow) os << "@window " << window << '\n';
  for (const QueryEdge& e : q.edges) {
    os << 0 << '\t' << "u" << e.src << '\t' << q.vertices[e.src].label << '\t'
       << e.label << '\t' << "u" << e.dst << '\t' << q.vertices[e.dst].label
       << '\n';
  }
}

void write_query_file(const std::string& path, const QueryGraph& q,
                      Timestamp window) {
  auto os = open_out(path);
  write_query(os, q, window);
}

void write_stats(std::ostream& os, const SelectivityTable& table) {
  os << "kind,key,count,selectivity\n";
  std::vector<std::pair<PrimitiveKey, uint64_t>> rows(table.counts.begin(),
                                                      table.counts.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.second < b.second;
  });
  os.precision(17);
  for (const auto& [key, count] : rows) {
    os << (key.kind == PrimitiveKey::Kind::Edge ? "edge" : "path2") << ','
       << key.to_string() << ',' << count << ',' << table.selectivity(key)
       << '\n';
  }
  os << "#total,edge," << table.total_edges << ",1\n";
  os << "#total,path2," << table.total_paths << ",1\n";
  os << "#meta,edges_sampled," << table.edges_sampled << ",-\n";
  os << "#meta,snapshot_ts," << table.snapshot_ts << ",-\n";
}

void write_stats_file(const std::string& path, const SelectivityTable& table) {
  auto os = open_out(path);
  write_stats(os, table);
}

SelectivityTable read_stats(std::istream& is) {
  SelectivityTable table;
  std::string line;
  size_t lineno = 0;
  while (std::getline(is, line)) {
    lineno++;
    if (line.empty()) continue;
    std::vector<std::string> f = split(line, ',');
    if (line[0] == '#') {
      if (f.size() >= 3 && f[0] == "#total") {
        if (f[1] == "edge") table.total_edges = std::stoull(f[2]);
        if (f[1] == "path2") table.total_paths = std::stoull(f[2]);
      } else if (f.size() >= 3 && f[0] == "#meta") {
        if (f[1] == "edges_sampled") table.edges_sampled = std::stoull(f[2]);
        if (f[1] == "snapshot_ts") table.snapshot_ts = std::stoll(f[2]);
      }
      continue;
    }
    if (f.size() >= 1 && f[0] == "kind") continue;  // header
    if (f.size() < 3)
      throw ParseError("stats line " + std::to_string(lineno) + ": bad row");
    if (f[0] != "edge" && f[0] != "path2")
      throw ParseError("stats line " + std::to_string(lineno) +
                       ": unknown kind '" + f[0] + "'");
    auto kind = f[0] == "path2" ? PrimitiveKey::Kind::Path2
                                : PrimitiveKey::Kind::Edge;
    auto key = PrimitiveKey::parse(f[1], kind);
    if (!key)
      throw ParseError("stats line " + std::to_string(lineno) + ": bad key '" +
                       f[1] + "'");
    table.counts[*key] = std::stoull(f[2]);
  }
  return table;
}

SelectivityTable read_stats_file(const std::string& path) {
  auto is = open_in(path);
  return read_stats(is);
}

}  // namespace sgm
