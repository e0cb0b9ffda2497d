#pragma once

// Benchmark suites on synthetic targets and their report formats.
//
//   planted  query = one community of a community graph, target = that graph
//   noise    same queries, target loses a fraction of its edges first
//   dense    query = G(60, 0.9), target = community graph with an
//            independently drawn G(60, 0.9) block attached by a few bridges

#include <cstdint>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gsim/pipeline.hpp"

namespace gsim {

inline constexpr const char* kVersion = "0.1.0";

enum class Suite { kPlanted, kNoise, kDense };

inline Suite parse_suite(const std::string& name) {
  if (name == "planted") return Suite::kPlanted;
  if (name == "noise") return Suite::kNoise;
  if (name == "dense") return Suite::kDense;
  throw std::invalid_argument("unknown suite '" + name + "' (planted|noise|dense)");
}

inline const char* suite_name(Suite s) {
  switch (s) {
    case Suite::kPlanted: return "planted";
    case Suite::kNoise: return "noise";
    case Suite::kDense: return "dense";
  }
  return "?";
}

struct BenchOptions {
  Suite suite = Suite::kPlanted;
  std::size_t repeats = 10;
  std::uint64_t seed = 1;
  RunConfig run;
  CommunityGraphParams target;
  double noise = 0.05;         ///< fraction of target edges removed (noise suite)
  VertexId dense_n = 60;
  double dense_p = 0.9;
  std::size_t dense_bridges = 3;
};

struct BenchResult {
  BenchOptions options;
  std::vector<ExperimentReport> reports;
  SuiteAggregate summary;
};

/// Target graph and query for repeat `r`. Suites sharing a seed share the
/// underlying community graph and query, so clean and noisy runs pair up.
struct BenchCase {
  Graph target;
  ExperimentQuery query;
};

inline BenchCase make_bench_case(const BenchOptions& opt, std::size_t r) {
  const std::uint64_t s = derive_seed(opt.seed, r);
  auto cg = community_graph(opt.target, derive_seed(s, 0));
  Rng pick(derive_seed(s, 1));
  const VertexSet& community = cg.communities[pick.below(cg.communities.size())];

  switch (opt.suite) {
    case Suite::kPlanted:
      return {cg.graph, {induced_subgraph(cg.graph, community).graph, community}};
    case Suite::kNoise:
      return {remove_edges(cg.graph, opt.noise, derive_seed(s, 2)),
              {induced_subgraph(cg.graph, community).graph, community}};
    case Suite::kDense: {
      auto block = gnp(opt.dense_n, opt.dense_p, derive_seed(s, 3));
      auto [target, ids] = plant_block(cg.graph, block, opt.dense_bridges, derive_seed(s, 4));
      return {std::move(target), {gnp(opt.dense_n, opt.dense_p, derive_seed(s, 5)), ids}};
    }
  }
  throw std::logic_error("unreachable");
}

inline BenchResult run_bench(const BenchOptions& opt) {
  opt.run.validate();
  BenchResult out{opt, {}, {}};
  for (std::size_t r = 0; r < opt.repeats; ++r) {
    auto c = make_bench_case(opt, r);
    auto labels = label_all(c.target, opt.run.labels, opt.run.workers);
    KdIndex index(labels);
    PreparedTarget prepared{c.target, labels, index};
    out.reports.push_back(run_experiment(prepared, c.query, opt.run, true,
                                         derive_seed(derive_seed(opt.seed, r), 6)));
  }
  out.summary = aggregate(out.reports);
  return out;
}

namespace detail {

inline std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

}  // namespace detail

inline std::string params_echo(const RunConfig& cfg) {
  return "l=" + std::to_string(cfg.labels.graphlet_size) + " t=" + std::to_string(cfg.labels.depth) +
         " k=" + std::to_string(cfg.match.k) + " alpha=" + detail::num(cfg.match.alpha) +
         " h1=" + detail::num(cfg.match.h1) + " h2=" + detail::num(cfg.match.h2);
}

/// Line-oriented key=value report. Timings are wall-clock and therefore
/// only included on request; everything else is a function of the options.
inline std::string format_report(const BenchResult& res, bool with_timings) {
  using detail::num;
  std::ostringstream os;
  const auto& o = res.options;
  os << "# suite=" << suite_name(o.suite) << " repeats=" << o.repeats << " seed=" << o.seed << ' '
     << params_echo(o.run) << '\n';
  for (std::size_t i = 0; i < res.reports.size(); ++i) {
    const auto& r = res.reports[i];
    os << "query=" << i << " size=" << r.query_size << " score=" << num(r.score)
       << " matched=" << r.matched << " exact=" << r.exact_match << " in_pruned=" << r.in_pruned;
    if (r.baseline) os << " baseline=" << num(*r.baseline);
    if (r.density) os << " density=" << num(*r.density);
    if (with_timings) os << " delta=" << num(r.delta) << " tau=" << num(r.tau);
    os << '\n';
  }
  const auto& a = res.summary;
  os << "# aggregate queries=" << a.queries << " mean_score=" << num(a.mean_score)
     << " mean_baseline=" << num(a.mean_baseline) << " exact_matches=" << a.exact_matches
     << " in_pruned=" << a.in_pruned;
  if (a.densities) os << " mean_density=" << num(a.mean_density);
  if (with_timings) os << " mean_delta=" << num(a.mean_delta) << " mean_tau=" << num(a.mean_tau);
  os << '\n';
  return os.str();
}

inline nlohmann::json report_json(const BenchResult& res, bool with_timings) {
  nlohmann::json j;
  const auto& o = res.options;
  j["suite"] = suite_name(o.suite);
  j["repeats"] = o.repeats;
  j["seed"] = o.seed;
  j["params"] = {{"l", o.run.labels.graphlet_size}, {"t", o.run.labels.depth},
                 {"k", o.run.match.k},              {"alpha", o.run.match.alpha},
                 {"h1", o.run.match.h1},            {"h2", o.run.match.h2}};
  j["queries"] = nlohmann::json::array();
  for (const auto& r : res.reports) {
    nlohmann::json q{{"size", r.query_size},    {"score", r.score},
                     {"matched", r.matched},    {"exact_match", r.exact_match},
                     {"in_pruned", r.in_pruned}};
    if (r.baseline) q["baseline"] = *r.baseline;
    if (r.density) q["density"] = *r.density;
    if (with_timings) {
      q["delta"] = r.delta;
      q["tau"] = r.tau;
    }
    j["queries"].push_back(q);
  }
  const auto& a = res.summary;
  j["aggregate"] = {{"queries", a.queries},           {"mean_score", a.mean_score},
                    {"mean_baseline", a.mean_baseline}, {"exact_matches", a.exact_matches},
                    {"in_pruned", a.in_pruned}};
  if (a.densities) j["aggregate"]["mean_density"] = a.mean_density;
  if (with_timings) {
    j["aggregate"]["mean_delta"] = a.mean_delta;
    j["aggregate"]["mean_tau"] = a.mean_tau;
  }
  return j;
}

/// Match listing: one "query_id<TAB>target_id" line per pair (external ids),
/// framed by a parameter header and a summary line.
inline std::string format_match_output(const MatchResult& result, const IdMap& query_ids,
                                       const IdMap& target_ids, const RunConfig& cfg,
                                       std::size_t query_n, double delta, double tau) {
  using detail::num;
  std::ostringstream os;
  os << "# gsim " << kVersion << " match " << params_echo(cfg) << '\n';
  for (auto [q, t] : result.mapping)
    os << query_ids.external(q) << '\t' << target_ids.external(t) << '\n';
  os << "# score=" << num(result.score) << " matched=" << result.matched.size() << " of=" << query_n
     << " delta=" << num(delta) << " tau=" << num(tau) << '\n';
  return os.str();
}

}  // namespace gsim
