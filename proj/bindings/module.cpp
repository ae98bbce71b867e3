#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "sgm/decompose.hpp"
#include "sgm/engine.hpp"
#include "sgm/io.hpp"
#include "sgm/oracle.hpp"
#include "sgm/selectivity.hpp"
#include "sgm/workload.hpp"

namespace py = pybind11;

namespace {

sgm::SelectivityTable table_from_graph(const sgm::DynamicGraph& g,
                                       const sgm::MapConfig& cfg) {
  sgm::SelectivityTable t = sgm::count_edge_types(g, cfg);
  t.merge_paths(sgm::count_2edge_paths(g, cfg));
  t.snapshot_ts = g.empty() ? 0 : g.t_last();
  t.edges_sampled = g.live_edge_count();
  return t;
}

sgm::Execution parse_mode(const std::string& mode) {
  if (mode == "eager") return sgm::Execution::Eager;
  if (mode == "lazy") return sgm::Execution::Lazy;
  throw py::value_error("mode must be 'eager' or 'lazy'");
}

sgm::Decomposition parse_decomposition(const std::string& s) {
  if (s == "single") return sgm::Decomposition::Single;
  if (s == "path") return sgm::Decomposition::Path;
  if (s == "auto") return sgm::Decomposition::Auto;
  throw py::value_error("strategy must be 'single', 'path' or 'auto'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Continuous subgraph pattern matching over edge streams";

  m.def(
      "compute_stats",
      [](const std::string& stream_path, const std::string& out_path,
         uint64_t prefix, int64_t window,
         const std::vector<std::string>& attrs, bool vertex_labels) {
        auto stream = sgm::read_stream_file(stream_path);
        if (prefix > 0 && stream.size() > prefix) stream.resize(prefix);
        sgm::DynamicGraph g(window > 0 ? window : sgm::kNoWindow);
        for (const auto& in : stream) g.add_edge(in);
        sgm::MapConfig cfg;
        cfg.attribute_keys = attrs;
        cfg.include_vertex_labels = vertex_labels;
        sgm::SelectivityTable t = table_from_graph(g, cfg);
        sgm::write_stats_file(out_path, t);
        py::dict out;
        out["keys"] = t.counts.size();
        out["total_edges"] = t.total_edges;
        out["total_paths"] = t.total_paths;
        return out;
      },
      py::arg("stream_path"), py::arg("out_path"), py::arg("prefix") = 0,
      py::arg("window") = 0, py::arg("attrs") = std::vector<std::string>{},
      py::arg("vertex_labels") = false,
      "Count edge types and 2-edge paths of a stream into a stats CSV.");

  m.def(
      "decompose",
      [](const std::string& query_path, const std::string& stats_path,
         const std::string& strategy, double threshold,
         const std::string& out_path) {
        sgm::QueryFile qf = sgm::read_query_file(query_path);
        sgm::SelectivityTable table = sgm::read_stats_file(stats_path);
        sgm::StrategyReport report =
            sgm::select_strategy(qf.query, table, threshold);
        sgm::Decomposition chosen = parse_decomposition(strategy);
        if (chosen == sgm::Decomposition::Auto)
          chosen = report.chosen.decomposition;
        sgm::PrimitiveSet prims =
            sgm::make_primitive_set(qf.query, table, chosen);
        sgm::SJTree tree = sgm::build_sjtree(qf.query, prims, table.config);
        std::ofstream os(out_path);
        if (!os) throw py::value_error("cannot write: " + out_path);
        tree.serialize(os);
        py::dict out;
        out["chosen"] = sgm::to_string(chosen);
        out["expected_selectivity"] = chosen == sgm::Decomposition::Path
                                          ? report.expected_path
                                          : report.expected_single;
        out["relative_selectivity"] = report.relative;
        out["forced"] = report.forced;
        out["warnings"] = report.warnings;
        out["leaves"] = tree.leaf_count();
        return out;
      },
      py::arg("query_path"), py::arg("stats_path"),
      py::arg("strategy") = "auto", py::arg("threshold") = 0.001,
      py::arg("out_path") = "tree.sjt",
      "Select a decomposition and serialize the join tree.");

  m.def(
      "run",
      [](const std::string& stream_path, const std::string& query_path,
         const std::string& tree_path, const std::string& mode) {
        auto stream = sgm::read_stream_file(stream_path);
        sgm::QueryFile qf = sgm::read_query_file(query_path);
        std::ifstream is(tree_path);
        if (!is) throw py::value_error("cannot open: " + tree_path);
        sgm::SJTree tree = sgm::SJTree::parse(is, qf.query);
        sgm::EngineConfig cfg;
        cfg.mode = parse_mode(mode);
        cfg.window = qf.window;
        sgm::Engine engine(std::move(tree), cfg);
        std::vector<std::pair<sgm::Timestamp,
                              std::vector<std::pair<uint32_t, uint64_t>>>>
            matches;
        for (const auto& in : stream) {
          engine.process_edge(in, [&](const sgm::MatchEvent& ev) {
            matches.emplace_back(ev.emitted_at, ev.match.pairs);
          });
        }
        py::dict metrics;
        const auto& met = engine.metrics();
        metrics["edges_processed"] = met.edges_processed;
        metrics["matches_emitted"] = met.matches_emitted;
        metrics["iso_calls"] = met.iso_calls;
        metrics["backsearch_calls"] = met.backsearch_calls;
        metrics["iso_fraction"] = met.iso_fraction();
        metrics["update_fraction"] = met.update_fraction();
        metrics["total_seconds"] = met.total_seconds;
        py::dict out;
        out["matches"] = matches;
        out["metrics"] = metrics;
        return out;
      },
      py::arg("stream_path"), py::arg("query_path"), py::arg("tree_path"),
      py::arg("mode") = "lazy",
      "Replay a stream against a query; returns matches and metrics.");

  m.def(
      "check",
      [](const std::string& stream_path, const std::string& query_path,
         const std::string& tree_path, const std::string& mode) {
        auto stream = sgm::read_stream_file(stream_path);
        sgm::QueryFile qf = sgm::read_query_file(query_path);
        std::ifstream is(tree_path);
        if (!is) throw py::value_error("cannot open: " + tree_path);
        sgm::SJTree tree = sgm::SJTree::parse(is, qf.query);
        sgm::EngineConfig cfg;
        cfg.mode = parse_mode(mode);
        cfg.window = qf.window;
        sgm::DiffReport r = sgm::incremental_diff_check(stream, tree, cfg);
        py::dict out;
        out["passed"] = r.passed;
        out["edges_checked"] = r.edges_checked;
        out["total_matches"] = r.total_matches;
        out["detail"] = r.describe();
        return out;
      },
      py::arg("stream_path"), py::arg("query_path"), py::arg("tree_path"),
      py::arg("mode") = "lazy",
      "Diff incremental emissions against exhaustive enumeration.");

  m.def(
      "gen_stream",
      [](const std::string& out_path, uint64_t vertex_count,
         uint64_t edge_count, const std::vector<std::string>& labels,
         double label_exponent, int64_t timestamp_stride, bool self_loops,
         uint64_t seed) {
        sgm::StreamSpec spec;
        spec.vertex_count = vertex_count;
        spec.edge_count = edge_count;
        if (!labels.empty()) spec.labels = labels;
        spec.label_exponent = label_exponent;
        spec.timestamp_stride = timestamp_stride;
        spec.allow_self_loops = self_loops;
        spec.seed = seed;
        auto stream = sgm::generate_stream(spec);
        sgm::write_stream_file(out_path, stream);
        return stream.size();
      },
      py::arg("out_path"), py::arg("vertex_count") = 1000,
      py::arg("edge_count") = 10000,
      py::arg("labels") = std::vector<std::string>{},
      py::arg("label_exponent") = 0.0, py::arg("timestamp_stride") = 1,
      py::arg("self_loops") = false, py::arg("seed") = 1,
      "Generate a synthetic edge stream file; returns the edge count.");

  m.def(
      "gen_queries",
      [](const std::string& stats_path, const std::string& out_dir,
         const std::string& shape, uint32_t size, size_t n,
         const std::vector<std::string>& labels, uint64_t seed,
         int64_t window) {
        sgm::SelectivityTable table = sgm::read_stats_file(stats_path);
        sgm::QuerySpec spec;
        if (shape == "path")
          spec.shape = sgm::QueryShape::Path;
        else if (shape == "binary-tree")
          spec.shape = sgm::QueryShape::BinaryTree;
        else if (shape == "nary-tree")
          spec.shape = sgm::QueryShape::NaryTree;
        else
          throw py::value_error("shape must be path|binary-tree|nary-tree");
        spec.size = size;
        spec.seed = seed;
        if (!labels.empty()) {
          spec.labels = labels;
        } else {
          for (const auto& [key, count] : table.counts)
            if (key.kind == sgm::PrimitiveKey::Kind::Edge)
              spec.labels.push_back(key.first.type);
        }
        sgm::GeneratedQueries gen = sgm::generate_queries(spec, table, n);
        std::vector<std::string> paths;
        for (size_t i = 0; i < gen.queries.size(); i++) {
          std::string path = out_dir + "/q" + std::to_string(i) + ".qg";
          sgm::write_query_file(path, gen.queries[i],
                                window > 0 ? window : sgm::kNoWindow);
          paths.push_back(path);
        }
        return paths;
      },
      py::arg("stats_path"), py::arg("out_dir"), py::arg("shape") = "path",
      py::arg("size") = 3, py::arg("n") = 10,
      py::arg("labels") = std::vector<std::string>{}, py::arg("seed") = 1,
      py::arg("window") = 0,
      "Generate benchmark query files; returns their paths.");
}
