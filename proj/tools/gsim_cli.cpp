// gsim: subgraph similarity search from the command line.
//
// Exit codes: 0 ok, 1 usage, 2 input parse error, 3 I/O error,
// 4 index/parameter mismatch, 5 disconnected query.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "gsim/gsim.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kParse = 2, kIo = 3, kMismatch = 4, kDisconnected = 5 };

struct Failure {
  ExitCode code;
  std::string message;
};

gsim::ParsedGraph read_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{kIo, "cannot open " + path};
  try {
    return gsim::parse_edge_list(in);
  } catch (const gsim::ParseError& e) {
    throw Failure{kParse, path + ": " + e.what()};
  }
}

std::vector<gsim::ExternalId> read_vertex_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{kIo, "cannot open " + path};
  std::vector<gsim::ExternalId> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto body = gsim::detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    gsim::ExternalId id = 0;
    if (!gsim::detail::parse_int(body, id))
      throw Failure{kParse, path + ": line " + std::to_string(line_no) + ": not an integer"};
    ids.push_back(id);
  }
  return ids;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Failure{kIo, "cannot open " + path + " for writing"};
  out << text;
  if (!out) throw Failure{kIo, "write failed: " + path};
}

std::string edge_list_text(const gsim::Graph& g, const gsim::IdMap& ids) {
  std::ostringstream os;
  gsim::write_edge_list(os, g, ids);
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gsim: find the induced subgraph of a target graph most similar to a query "
               "under the graphlet kernel"};
  app.require_subcommand(1);
  app.set_version_flag("--version", gsim::kVersion);

  // preprocess
  std::string graph_path, out_path, index_path, query_path, vertices_path, report_path, json_path;
  std::uint32_t depth = 2;
  int graphlet_size = 4;
  unsigned threads = default_threads();
  auto* preprocess = app.add_subcommand("preprocess", "label every target vertex and write an index");
  preprocess->add_option("--graph", graph_path, "target edge list")->required();
  preprocess->add_option("--depth", depth, "BFS depth t")->capture_default_str();
  preprocess->add_option("--graphlet-size", graphlet_size, "graphlet size l (3-5)")->capture_default_str();
  preprocess->add_option("--threads", threads, "labeling workers")->capture_default_str();
  preprocess->add_option("--out", out_path, "index file to write")->required();

  // query
  gsim::MatchParams match;
  std::optional<std::uint32_t> expect_depth;
  std::optional<int> expect_size;
  auto* query = app.add_subcommand("query", "search the target for the best match of a query graph");
  query->add_option("--graph", graph_path, "target edge list")->required();
  query->add_option("--index", index_path, "index written by preprocess")->required();
  query->add_option("--query", query_path, "query edge list")->required();
  query->add_option("--k", match.k, "nearest neighbors per query vertex")->capture_default_str();
  query->add_option("--alpha", match.alpha, "seed weight exponent in (0,1)")->capture_default_str();
  query->add_option("--h1", match.h1, "growth similarity threshold")->capture_default_str();
  query->add_option("--h2", match.h2, "completion Jaccard threshold")->capture_default_str();
  query->add_option("--depth", expect_depth, "expected index BFS depth (checked)");
  query->add_option("--graphlet-size", expect_size, "expected index graphlet size (checked)");
  query->add_option("--threads", threads, "query labeling workers")->capture_default_str();
  query->add_option("--output", out_path, "match output file (default stdout)");

  // score
  auto* score = app.add_subcommand("score", "graphlet kernel between a query and a target vertex set");
  score->add_option("--graph", graph_path, "target edge list")->required();
  score->add_option("--vertices", vertices_path, "target vertex ids, one per line")->required();
  score->add_option("--query", query_path, "query edge list")->required();
  score->add_option("--graphlet-size", graphlet_size, "graphlet size l (3-5)")->capture_default_str();

  // gen
  std::uint64_t seed = 1;
  gsim::VertexId gen_n = 100;
  double gen_p = 0.1;
  auto* gen = app.add_subcommand("gen", "generate a random graph");
  gen->require_subcommand(1);
  auto* gen_gnp = gen->add_subcommand("gnp", "Erdos-Renyi G(n, p)");
  gen_gnp->add_option("--n", gen_n, "vertices")->required();
  gen_gnp->add_option("--p", gen_p, "edge probability")->required();
  gen_gnp->add_option("--seed", seed, "random seed")->capture_default_str();
  gen_gnp->add_option("--out", out_path, "edge list to write (default stdout)");
  gsim::CommunityGraphParams community;
  auto* gen_comm = gen->add_subcommand("community", "mixed-structure community graph");
  gen_comm->add_option("--n", community.n, "vertices")->capture_default_str();
  gen_comm->add_option("--min-size", community.min_size, "smallest community")->capture_default_str();
  gen_comm->add_option("--max-size", community.max_size, "largest community")->capture_default_str();
  gen_comm->add_option("--extra-bridges", community.extra_bridges,
                       "bridges per community beyond the spanning tree")->capture_default_str();
  gen_comm->add_option("--seed", seed, "random seed")->capture_default_str();
  gen_comm->add_option("--out", out_path, "edge list to write (default stdout)");
  std::string communities_path;
  gen_comm->add_option("--communities-out", communities_path, "one community per line");

  // perturb
  double remove_frac = 0.05;
  auto* perturb = app.add_subcommand("perturb", "remove a random fraction of edges");
  perturb->add_option("--graph", graph_path, "input edge list")->required();
  perturb->add_option("--remove-frac", remove_frac, "fraction of edges to delete")->capture_default_str();
  perturb->add_option("--seed", seed, "random seed")->capture_default_str();
  perturb->add_option("--out", out_path, "edge list to write (default stdout)");

  // extract
  std::size_t extract_size = 20;
  std::string subgraph_path;
  auto* extract = app.add_subcommand("extract", "sample a random connected vertex set");
  extract->add_option("--graph", graph_path, "input edge list")->required();
  extract->add_option("--size", extract_size, "number of vertices")->required();
  extract->add_option("--seed", seed, "random seed")->capture_default_str();
  extract->add_option("--out", out_path, "vertex list to write (default stdout)");
  extract->add_option("--subgraph-out", subgraph_path, "also write the induced edge list");

  // bench
  gsim::BenchOptions bench_opt;
  std::string suite = "planted";
  bool timings = false;
  auto* bench = app.add_subcommand("bench", "run a synthetic benchmark suite");
  bench->add_option("--suite", suite, "planted | noise | dense")->capture_default_str();
  bench->add_option("--repeats", bench_opt.repeats, "number of queries")->capture_default_str();
  bench->add_option("--seed", seed, "random seed")->capture_default_str();
  bench->add_option("--threads", threads, "labeling workers")->capture_default_str();
  bench->add_option("--depth", depth, "BFS depth t")->capture_default_str();
  bench->add_option("--graphlet-size", graphlet_size, "graphlet size l")->capture_default_str();
  bench->add_option("--k", match.k, "nearest neighbors per query vertex")->capture_default_str();
  bench->add_option("--alpha", match.alpha, "seed weight exponent")->capture_default_str();
  bench->add_option("--h1", match.h1, "growth threshold")->capture_default_str();
  bench->add_option("--h2", match.h2, "completion threshold")->capture_default_str();
  bench->add_option("--report", report_path, "key=value report file");
  bench->add_option("--json", json_path, "JSON report file");
  bench->add_flag("--timings", timings, "include wall-clock timings in report files");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*preprocess) {
      auto start = std::chrono::steady_clock::now();
      auto parsed = read_graph(graph_path);
      gsim::LabelParams params{depth, graphlet_size};
      params.validate();
      auto labels = gsim::label_all(parsed.graph, params, threads);
      gsim::save_index(labels, out_path);
      std::cout << "n=" << parsed.graph.n() << " m=" << parsed.graph.m()
                << " dimension=" << labels.dimension() << " elapsed=" << seconds_since(start)
                << "s\n";
    } else if (*query) {
      auto target = read_graph(graph_path);
      auto labels = gsim::load_index(index_path);
      if (labels.size() != target.graph.n())
        throw Failure{kMismatch, *gsim::staleness_warning(labels, target.graph)};
      if (auto warn = gsim::staleness_warning(labels, target.graph))
        std::cerr << "warning: " << *warn << '\n';
      if ((expect_depth && *expect_depth != labels.params.depth) ||
          (expect_size && *expect_size != labels.params.graphlet_size))
        throw Failure{kMismatch, "index was built with l=" +
                                     std::to_string(labels.params.graphlet_size) +
                                     " t=" + std::to_string(labels.params.depth)};
      if (match.k > target.graph.n()) {
        std::cerr << "warning: k=" << match.k << " exceeds target size, using k="
                  << target.graph.n() << '\n';
        match.k = std::max<std::size_t>(1, target.graph.n());
      }
      auto q = read_graph(query_path);
      gsim::RunConfig cfg{labels.params, match, threads, seed};
      gsim::KdIndex index(labels);
      auto run = gsim::run_query({target.graph, labels, index}, q.graph, cfg);
      write_text(out_path, gsim::format_match_output(run.result, q.ids, target.ids, cfg,
                                                     q.graph.n(), run.delta, run.tau));
    } else if (*score) {
      auto target = read_graph(graph_path);
      auto q = read_graph(query_path);
      auto ext = read_vertex_list(vertices_path);
      if (ext.empty()) throw Failure{kParse, vertices_path + ": vertex list is empty"};
      std::vector<gsim::VertexId> ids;
      for (auto e : ext) {
        if (!target.ids.has(e))
          throw Failure{kParse, vertices_path + ": vertex " + std::to_string(e) + " not in graph"};
        ids.push_back(target.ids.internal(e));
      }
      gsim::check_graphlet_size(graphlet_size);
      double k = gsim::match_score(q.graph, target.graph, gsim::VertexSet(std::move(ids)),
                                   graphlet_size);
      std::cout << gsim::detail::num(k) << '\n';
    } else if (*gen_gnp) {
      auto g = gsim::gnp(gen_n, gen_p, seed);
      write_text(out_path, "# gnp n=" + std::to_string(gen_n) + " p=" + gsim::detail::num(gen_p) +
                               " seed=" + std::to_string(seed) + "\n" +
                               edge_list_text(g, gsim::IdMap::identity(g.n())));
    } else if (*gen_comm) {
      auto cg = gsim::community_graph(community, seed);
      write_text(out_path, "# community seed=" + std::to_string(seed) + "\n" +
                               edge_list_text(cg.graph, gsim::IdMap::identity(cg.graph.n())));
      if (!communities_path.empty()) {
        std::ostringstream os;
        for (const auto& c : cg.communities) {
          for (std::size_t i = 0; i < c.size(); ++i) os << (i ? " " : "") << c[i];
          os << '\n';
        }
        write_text(communities_path, os.str());
      }
    } else if (*perturb) {
      auto parsed = read_graph(graph_path);
      auto g = gsim::remove_edges(parsed.graph, remove_frac, seed);
      write_text(out_path, "# perturb remove-frac=" + gsim::detail::num(remove_frac) +
                               " seed=" + std::to_string(seed) + "\n" +
                               edge_list_text(g, parsed.ids));
    } else if (*extract) {
      auto parsed = read_graph(graph_path);
      auto vs = gsim::random_connected_subgraph(parsed.graph, extract_size, seed);
      std::ostringstream os;
      os << "# extract size=" << extract_size << " seed=" << seed << '\n';
      for (auto v : vs) os << parsed.ids.external(v) << '\n';
      write_text(out_path, os.str());
      if (!subgraph_path.empty()) {
        auto sub = gsim::induced_subgraph(parsed.graph, vs);
        gsim::IdMap ext;
        for (auto v : vs) ext.add(parsed.ids.external(v));
        write_text(subgraph_path, edge_list_text(sub.graph, ext));
      }
    } else if (*bench) {
      bench_opt.suite = gsim::parse_suite(suite);
      bench_opt.seed = seed;
      bench_opt.run = gsim::RunConfig{{depth, graphlet_size}, match, threads, seed};
      auto res = gsim::run_bench(bench_opt);
      std::cout << gsim::format_report(res, true);
      if (!report_path.empty()) write_text(report_path, gsim::format_report(res, timings));
      if (!json_path.empty()) write_text(json_path, gsim::report_json(res, timings).dump(2) + "\n");
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.code;
  } catch (const gsim::DisconnectedQuery& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDisconnected;
  } catch (const gsim::ParamMismatch& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kMismatch;
  } catch (const gsim::FormatError& e) {
    std::cerr << "error: " << index_path << ": " << e.what() << '\n';
    return kMismatch;
  } catch (const gsim::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}
