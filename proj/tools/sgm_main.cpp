#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sgm/decompose.hpp"
#include "sgm/engine.hpp"
#include "sgm/io.hpp"
#include "sgm/oracle.hpp"
#include "sgm/selectivity.hpp"
#include "sgm/workload.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAlarm = 2;
constexpr int kExitIo = 3;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  return os;
}

std::vector<sgm::EdgeInput> load_stream(const std::string& path) {
  try {
    return sgm::read_stream_file(path);
  } catch (const sgm::ParseError& e) {
    throw IoError(std::string("stream ") + path + ": " + e.what());
  }
}

sgm::QueryFile load_query(const std::string& path) {
  try {
    return sgm::read_query_file(path);
  } catch (const sgm::ParseError& e) {
    throw IoError(std::string("query ") + path + ": " + e.what());
  }
}

sgm::SelectivityTable load_stats(const std::string& path) {
  try {
    return sgm::read_stats_file(path);
  } catch (const sgm::ParseError& e) {
    throw IoError(std::string("stats ") + path + ": " + e.what());
  }
}

sgm::SJTree load_tree(const std::string& path, const sgm::QueryGraph& query) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open tree file: " + path);
  try {
    return sgm::SJTree::parse(is, query);
  } catch (const std::exception& e) {
    throw IoError(std::string("tree ") + path + ": " + e.what());
  }
}

sgm::SelectivityTable stats_from_graph(const sgm::DynamicGraph& g,
                                       const sgm::MapConfig& cfg) {
  sgm::SelectivityTable t = sgm::count_edge_types(g, cfg);
  t.merge_paths(sgm::count_2edge_paths(g, cfg));
  t.snapshot_ts = g.empty() ? 0 : g.t_last();
  t.edges_sampled = g.live_edge_count();
  return t;
}

void write_match_line(std::ostream& os, const sgm::MatchEvent& ev) {
  os << ev.emitted_at << '\t';
  bool first = true;
  for (const auto& [qe, de] : ev.match.pairs) {
    if (!first) os << ',';
    os << qe << '=' << de;
    first = false;
  }
  os << '\n';
}

void write_metrics(std::ostream& os, const sgm::EngineMetrics& m,
                   const std::vector<size_t>& table_sizes) {
  os << "key,value\n";
  os << "edges_processed," << m.edges_processed << '\n';
  os << "matches_emitted," << m.matches_emitted << '\n';
  os << "iso_calls," << m.iso_calls << '\n';
  os << "backsearch_calls," << m.backsearch_calls << '\n';
  os << "partial_matches_pruned," << m.partial_matches_pruned << '\n';
  os << "iso_seconds," << m.iso_seconds << '\n';
  os << "update_seconds," << m.update_seconds << '\n';
  os << "total_seconds," << m.total_seconds << '\n';
  os << "iso_fraction," << m.iso_fraction() << '\n';
  os << "update_fraction," << m.update_fraction() << '\n';
  if (m.total_seconds > 0.0)
    os << "edges_per_sec," << double(m.edges_processed) / m.total_seconds
       << '\n';
  size_t peak = 0;
  for (size_t s : table_sizes) peak = std::max(peak, s);
  os << "peak_table_size," << peak << '\n';
}

// Flat key=value stream-spec file for gen-stream.
sgm::StreamSpec parse_stream_spec(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open spec file: " + path);
  sgm::StreamSpec spec;
  std::string line;
  size_t lineno = 0;
  auto split_list = [](const std::string& v) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(v);
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
  };
  while (std::getline(is, line)) {
    lineno++;
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw IoError(path + ":" + std::to_string(lineno) +
                    ": expected key=value");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    try {
      if (key == "vertex_count")
        spec.vertex_count = std::stoull(value);
      else if (key == "edge_count")
        spec.edge_count = std::stoull(value);
      else if (key == "labels")
        spec.labels = split_list(value);
      else if (key == "label_exponent")
        spec.label_exponent = std::stod(value);
      else if (key == "explicit_weights") {
        spec.explicit_weights.clear();
        for (const auto& w : split_list(value))
          spec.explicit_weights.push_back(std::stod(w));
      } else if (key == "timestamp_stride")
        spec.timestamp_stride = std::stoll(value);
      else if (key == "attachment") {
        if (value == "uniform")
          spec.attachment = sgm::AttachmentModel::Uniform;
        else if (value == "preferential")
          spec.attachment = sgm::AttachmentModel::Preferential;
        else
          throw IoError(path + ": unknown attachment model: " + value);
      } else if (key == "vertex_label")
        spec.vertex_label = value;
      else if (key == "allow_self_loops")
        spec.allow_self_loops = (value == "1" || value == "true");
      else if (key == "seed")
        spec.seed = std::stoull(value);
      else
        throw IoError(path + ": unknown spec key: " + key);
    } catch (const std::invalid_argument&) {
      throw IoError(path + ":" + std::to_string(lineno) + ": bad value for " +
                    key);
    }
  }
  return spec;
}

struct StrategyCell {
  std::string name;
  sgm::Decomposition decomposition;
  sgm::Execution execution;
};

const std::vector<StrategyCell> kAllStrategies = {
    {"Single", sgm::Decomposition::Single, sgm::Execution::Eager},
    {"SingleLazy", sgm::Decomposition::Single, sgm::Execution::Lazy},
    {"Path", sgm::Decomposition::Path, sgm::Execution::Eager},
    {"PathLazy", sgm::Decomposition::Path, sgm::Execution::Lazy},
};

struct CellResult {
  double runtime = 0.0;
  uint64_t matches = 0;
  double iso_fraction = 0.0;
};

CellResult run_cell(const std::vector<sgm::EdgeInput>& stream,
                    const sgm::QueryGraph& query, sgm::Timestamp window,
                    const sgm::SelectivityTable& table,
                    const StrategyCell& cell) {
  sgm::PrimitiveSet m =
      sgm::make_primitive_set(query, table, cell.decomposition);
  sgm::SJTree tree = sgm::build_sjtree(query, m, table.config);
  sgm::EngineConfig cfg;
  cfg.mode = cell.execution;
  cfg.window = window;
  sgm::Engine engine(std::move(tree), cfg);
  std::set<sgm::MatchSignature> sigs;
  auto start = Clock::now();
  for (const auto& in : stream) {
    engine.process_edge(in, [&](const sgm::MatchEvent& ev) {
      sigs.insert(sgm::canonical_signature(ev.match));
    });
  }
  CellResult r;
  r.runtime = seconds_since(start);
  r.matches = sigs.size();
  r.iso_fraction = engine.metrics().iso_fraction();
  return r;
}

CellResult run_oracle_baseline(const std::vector<sgm::EdgeInput>& stream,
                               const sgm::QueryGraph& query,
                               sgm::Timestamp window, size_t prefix) {
  size_t n = prefix == 0 ? stream.size() : std::min(prefix, stream.size());
  sgm::DynamicGraph g(window);
  std::set<sgm::MatchSignature> sigs;
  auto start = Clock::now();
  for (size_t i = 0; i < n; i++) {
    g.add_edge(stream[i]);
    // Non-incremental: re-enumerate everything in the window per edge.
    for (const auto& m : sgm::enumerate_all_matches(g, query, window))
      sigs.insert(sgm::canonical_signature(m));
  }
  CellResult r;
  r.runtime = seconds_since(start);
  r.matches = sigs.size();
  if (n < stream.size()) {
    // Linear extrapolation from the measured prefix.
    r.runtime *= double(stream.size()) / double(n);
  }
  return r;
}

// ---- subcommands ----------------------------------------------------------

struct StatsArgs {
  std::string stream_path;
  std::string out_path;
  uint64_t prefix = 0;  // 0 = whole stream
  int64_t window = 0;   // 0 = unbounded
  std::vector<std::string> attrs;
  bool vertex_labels = false;
};

int cmd_stats(const StatsArgs& a) {
  auto stream = load_stream(a.stream_path);
  if (a.prefix > 0 && stream.size() > a.prefix) stream.resize(a.prefix);
  sgm::DynamicGraph g(a.window > 0 ? a.window : sgm::kNoWindow);
  for (const auto& in : stream) g.add_edge(in);
  sgm::MapConfig cfg;
  cfg.attribute_keys = a.attrs;
  cfg.include_vertex_labels = a.vertex_labels;
  sgm::SelectivityTable table = stats_from_graph(g, cfg);
  auto os = open_out(a.out_path);
  sgm::write_stats(os, table);
  std::cerr << "stats: " << table.counts.size() << " keys, "
            << table.total_edges << " edges, " << table.total_paths
            << " paths\n";
  return kExitOk;
}

struct DecomposeArgs {
  std::string query_path;
  std::string stats_path;
  std::string strategy = "auto";
  double threshold = 0.001;
  std::string out_path;
};

int cmd_decompose(const DecomposeArgs& a) {
  sgm::QueryFile qf = load_query(a.query_path);
  sgm::SelectivityTable table = load_stats(a.stats_path);
  sgm::StrategyReport report = sgm::select_strategy(qf.query, table,
                                                    a.threshold);
  sgm::Decomposition chosen = report.chosen.decomposition;
  if (a.strategy == "single")
    chosen = sgm::Decomposition::Single;
  else if (a.strategy == "path")
    chosen = sgm::Decomposition::Path;
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  sgm::PrimitiveSet m = sgm::make_primitive_set(qf.query, table, chosen);
  sgm::SJTree tree = sgm::build_sjtree(qf.query, m, table.config);
  auto os = open_out(a.out_path);
  tree.serialize(os);
  std::cout << "expected_selectivity="
            << (chosen == sgm::Decomposition::Path ? report.expected_path
                                                   : report.expected_single)
            << " relative_selectivity=" << report.relative
            << " chosen=" << sgm::to_string(chosen) << '\n';
  return kExitOk;
}

struct RunArgs {
  std::string stream_path;
  std::string query_path;
  std::string tree_path;
  std::string mode = "lazy";
  std::string out_path;
  std::string metrics_path;
};

int cmd_run(const RunArgs& a) {
  auto stream = load_stream(a.stream_path);
  sgm::QueryFile qf = load_query(a.query_path);
  sgm::SJTree tree = load_tree(a.tree_path, qf.query);
  sgm::EngineConfig cfg;
  cfg.mode = a.mode == "eager" ? sgm::Execution::Eager : sgm::Execution::Lazy;
  cfg.window = qf.window;
  sgm::Engine engine(std::move(tree), cfg);
  auto os = open_out(a.out_path);
  for (const auto& in : stream) {
    engine.process_edge(
        in, [&](const sgm::MatchEvent& ev) { write_match_line(os, ev); });
  }
  if (!a.metrics_path.empty()) {
    auto ms = open_out(a.metrics_path);
    write_metrics(ms, engine.metrics(), engine.table_sizes());
  }
  std::cerr << "run: " << engine.metrics().matches_emitted << " matches over "
            << engine.metrics().edges_processed << " edges\n";
  return kExitOk;
}

struct CheckArgs {
  std::string stream_path;
  std::string query_path;
  std::string tree_path;
  std::string mode = "lazy";
};

int cmd_check(const CheckArgs& a) {
  auto stream = load_stream(a.stream_path);
  sgm::QueryFile qf = load_query(a.query_path);
  sgm::SJTree tree = load_tree(a.tree_path, qf.query);
  sgm::EngineConfig cfg;
  cfg.mode = a.mode == "eager" ? sgm::Execution::Eager : sgm::Execution::Lazy;
  cfg.window = qf.window;
  sgm::DiffReport report = sgm::incremental_diff_check(stream, tree, cfg);
  if (!report.passed) {
    std::cerr << report.describe() << '\n';
    return kExitAlarm;
  }
  std::cerr << "check: ok, " << report.edges_checked << " edges, "
            << report.total_matches << " matches\n";
  return kExitOk;
}

struct BenchArgs {
  std::string stream_path;
  std::vector<std::string> query_paths;
  std::string stats_path;
  std::string out_path;
  uint64_t oracle_prefix = 0;
};

int cmd_bench(const BenchArgs& a) {
  auto stream = load_stream(a.stream_path);
  sgm::SelectivityTable table;
  if (!a.stats_path.empty()) {
    table = load_stats(a.stats_path);
  } else {
    sgm::DynamicGraph g;
    for (const auto& in : stream) g.add_edge(in);
    table = stats_from_graph(g, sgm::MapConfig{});
  }
  std::ostringstream csv;
  csv << "group,strategy,mean_runtime,matches,iso_fraction,speedup_vs_oracle\n";
  for (const std::string& qpath : a.query_paths) {
    sgm::QueryFile qf = load_query(qpath);
    std::string group = std::filesystem::path(qpath).stem().string();
    CellResult oracle =
        run_oracle_baseline(stream, qf.query, qf.window, a.oracle_prefix);
    if (a.oracle_prefix > 0 && a.oracle_prefix < stream.size())
      std::cerr << "note: oracle baseline for " << group << " measured on a "
                << a.oracle_prefix
                << "-edge prefix and extrapolated linearly\n";
    std::optional<uint64_t> agreed;
    std::vector<std::pair<const StrategyCell*, CellResult>> cells;
    for (const auto& cell : kAllStrategies) {
      CellResult r = run_cell(stream, qf.query, qf.window, table, cell);
      if (agreed && *agreed != r.matches) {
        std::cerr << "correctness alarm: strategy " << cell.name
                  << " found " << r.matches << " matches for " << group
                  << ", expected " << *agreed << '\n';
        return kExitAlarm;
      }
      agreed = r.matches;
      cells.emplace_back(&cell, r);
    }
    csv << group << ",Oracle," << oracle.runtime << ',' << oracle.matches
        << ",,1\n";
    for (const auto& [cell, r] : cells) {
      csv << group << ',' << cell->name << ',' << r.runtime << ','
          << r.matches << ',' << r.iso_fraction << ','
          << (r.runtime > 0.0 ? oracle.runtime / r.runtime : 0.0) << '\n';
    }
  }
  if (a.out_path.empty()) {
    std::cout << csv.str();
  } else {
    auto os = open_out(a.out_path);
    os << csv.str();
  }
  return kExitOk;
}

struct GenStreamArgs {
  std::string spec_path;
  std::string out_path;
};

int cmd_gen_stream(const GenStreamArgs& a) {
  sgm::StreamSpec spec = parse_stream_spec(a.spec_path);
  auto stream = sgm::generate_stream(spec);
  sgm::write_stream_file(a.out_path, stream);
  std::cerr << "gen-stream: " << stream.size() << " edges\n";
  return kExitOk;
}

struct GenQueriesArgs {
  std::string shape = "path";
  uint32_t size = 3;
  std::string stats_path;
  size_t count = 10;
  std::string out_dir;
  std::vector<std::string> labels;
  uint64_t seed = 1;
  int64_t window = 0;
};

int cmd_gen_queries(const GenQueriesArgs& a) {
  sgm::SelectivityTable table = load_stats(a.stats_path);
  sgm::QuerySpec spec;
  if (a.shape == "path")
    spec.shape = sgm::QueryShape::Path;
  else if (a.shape == "binary-tree")
    spec.shape = sgm::QueryShape::BinaryTree;
  else if (a.shape == "nary-tree")
    spec.shape = sgm::QueryShape::NaryTree;
  else
    throw CLI::ValidationError("--shape",
                               "expected path|binary-tree|nary-tree");
  spec.size = a.size;
  spec.seed = a.seed;
  if (!a.labels.empty()) {
    spec.labels = a.labels;
  } else {
    for (const auto& [key, count] : table.counts)
      if (key.kind == sgm::PrimitiveKey::Kind::Edge)
        spec.labels.push_back(key.first.type);
  }
  if (spec.labels.empty())
    throw IoError("stats file lists no edge types and no --labels given");
  sgm::GeneratedQueries gen = sgm::generate_queries(spec, table, a.count);
  for (const auto& w : gen.warnings) std::cerr << "warning: " << w << '\n';
  std::error_code ec;
  std::filesystem::create_directories(a.out_dir, ec);
  if (ec) throw IoError("cannot create directory: " + a.out_dir);
  sgm::Timestamp window = a.window > 0 ? a.window : sgm::kNoWindow;
  for (size_t i = 0; i < gen.queries.size(); i++) {
    std::string path = a.out_dir + "/q" + std::to_string(i) + ".qg";
    sgm::write_query_file(path, gen.queries[i], window);
  }
  std::cerr << "gen-queries: " << gen.queries.size() << " of " << a.count
            << " requested (" << gen.candidates << " candidates, "
            << gen.filtered_unseen << " dropped for unseen paths)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous subgraph pattern matching over edge streams"};
  app.require_subcommand(1);

  StatsArgs stats_args;
  auto* stats = app.add_subcommand(
      "stats", "Compute edge-type and 2-edge-path statistics");
  stats->add_option("--stream", stats_args.stream_path, "Edge stream TSV")
      ->required();
  stats->add_option("-o,--out", stats_args.out_path, "Output stats CSV")
      ->required();
  stats->add_option("--prefix", stats_args.prefix,
                    "Only ingest the first N edges (0 = all)");
  stats->add_option("--window", stats_args.window,
                    "Sliding window width (0 = unbounded)");
  stats->add_option("--attr", stats_args.attrs,
                    "Attribute key folded into edge types (repeatable)");
  stats->add_flag("--vertex-labels", stats_args.vertex_labels,
                  "Fold endpoint vertex labels into edge types");

  DecomposeArgs dec_args;
  auto* dec = app.add_subcommand("decompose",
                                 "Build a join tree for a query");
  dec->add_option("--query", dec_args.query_path, "Query file")->required();
  dec->add_option("--stats", dec_args.stats_path, "Stats CSV")->required();
  dec->add_option("--strategy", dec_args.strategy,
                  "single|path|auto (default auto)")
      ->check(CLI::IsMember({"single", "path", "auto"}));
  dec->add_option("--threshold", dec_args.threshold,
                  "Relative-selectivity threshold for auto");
  dec->add_option("-o,--out", dec_args.out_path, "Output tree file")
      ->required();

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Replay a stream against a query");
  run->add_option("--stream", run_args.stream_path, "Edge stream TSV")
      ->required();
  run->add_option("--query", run_args.query_path, "Query file")->required();
  run->add_option("--tree", run_args.tree_path, "Join tree file")->required();
  run->add_option("--mode", run_args.mode, "eager|lazy (default lazy)")
      ->check(CLI::IsMember({"eager", "lazy"}));
  run->add_option("--out", run_args.out_path, "Match output TSV")->required();
  run->add_option("--metrics", run_args.metrics_path, "Metrics CSV");

  CheckArgs check_args;
  auto* check = app.add_subcommand(
      "check", "Diff engine emissions against exhaustive enumeration");
  check->add_option("--stream", check_args.stream_path, "Edge stream TSV")
      ->required();
  check->add_option("--query", check_args.query_path, "Query file")
      ->required();
  check->add_option("--tree", check_args.tree_path, "Join tree file")
      ->required();
  check->add_option("--mode", check_args.mode, "eager|lazy (default lazy)")
      ->check(CLI::IsMember({"eager", "lazy"}));

  BenchArgs bench_args;
  auto* bench = app.add_subcommand(
      "bench", "Compare strategies against the exhaustive baseline");
  bench->add_option("--stream", bench_args.stream_path, "Edge stream TSV")
      ->required();
  bench->add_option("--query", bench_args.query_paths,
                    "Query file (repeatable)")
      ->required();
  bench->add_option("--stats", bench_args.stats_path,
                    "Stats CSV (computed from the stream when omitted)");
  bench->add_option("--out", bench_args.out_path,
                    "Report CSV (stdout when omitted)");
  bench->add_option("--oracle-prefix", bench_args.oracle_prefix,
                    "Baseline prefix length, extrapolated linearly (0 = full)");

  GenStreamArgs gs_args;
  auto* gs = app.add_subcommand("gen-stream", "Generate a synthetic stream");
  gs->add_option("--spec", gs_args.spec_path, "key=value spec file")
      ->required();
  gs->add_option("-o,--out", gs_args.out_path, "Output stream TSV")
      ->required();

  GenQueriesArgs gq_args;
  auto* gq = app.add_subcommand("gen-queries",
                                "Generate benchmark query files");
  gq->add_option("--shape", gq_args.shape, "path|binary-tree|nary-tree");
  gq->add_option("--size", gq_args.size, "Edges per query");
  gq->add_option("--stats", gq_args.stats_path, "Stats CSV")->required();
  gq->add_option("-n,--count", gq_args.count, "Number of queries");
  gq->add_option("-o,--out", gq_args.out_dir, "Output directory")->required();
  gq->add_option("--labels", gq_args.labels, "Label alphabet (repeatable)");
  gq->add_option("--seed", gq_args.seed, "Generator seed");
  gq->add_option("--window", gq_args.window,
                 "Window written into the query files (0 = unbounded)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*stats) return cmd_stats(stats_args);
    if (*dec) return cmd_decompose(dec_args);
    if (*run) return cmd_run(run_args);
    if (*check) return cmd_check(check_args);
    if (*bench) return cmd_bench(bench_args);
    if (*gs) return cmd_gen_stream(gs_args);
    if (*gq) return cmd_gen_queries(gq_args);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const sgm::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitAlarm;
  }
  return kExitUsage;
}
