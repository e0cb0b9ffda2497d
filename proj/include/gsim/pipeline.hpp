#pragma once

// End-to-end query runs plus the experiment utilities: random graph models,
// edge-removal noise, random connected subgraphs and density.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "gsim/graph.hpp"
#include "gsim/graphlet.hpp"
#include "gsim/kdtree.hpp"
#include "gsim/labeling.hpp"
#include "gsim/matcher.hpp"

namespace gsim {

/// Seedable generator: std::mt19937_64 (a fully specified engine) with
/// distribution code written out here, since the standard library's
/// distributions differ between implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: empty range");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do x = next();
    while (x >= limit);
    return x % bound;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer, used to derive independent sub-seeds.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Erdos-Renyi G(n, p): pairs (i, j), i < j, visited in lexicographic order,
/// each kept when a uniform draw falls below p.
inline Graph gnp(VertexId n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("gnp: p must lie in [0, 1]");
  Rng rng(seed);
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (VertexId i = 0; i < n; ++i)
    for (VertexId j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) edges.emplace_back(i, j);
  return Graph::from_edges(n, edges);
}

/// Deletes floor(fraction * m) edges chosen uniformly without replacement.
inline Graph remove_edges(const Graph& g, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw std::invalid_argument("remove_edges: fraction must lie in [0, 1]");
  auto edges = g.edges();
  auto drop = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(edges.size())));
  Rng rng(seed);
  // partial Fisher-Yates: the last `drop` slots receive the removed edges
  for (std::size_t i = 0; i < drop; ++i) {
    std::size_t last = edges.size() - 1 - i;
    std::swap(edges[last], edges[rng.below(last + 1)]);
  }
  edges.resize(edges.size() - drop);
  return Graph::from_edges(g.n(), edges);
}

/// Connected vertex set of the given size, grown from a uniformly chosen
/// start by repeatedly absorbing a uniformly chosen frontier vertex.
inline VertexSet random_connected_subgraph(const Graph& g, std::size_t size, std::uint64_t seed) {
  if (size == 0 || size > g.n())
    throw std::invalid_argument("random_connected_subgraph: size must lie in [1, n]");
  std::vector<VertexId> starts;
  for (const auto& comp : connected_components(g))
    if (comp.size() >= size) starts.insert(starts.end(), comp.begin(), comp.end());
  if (starts.empty())
    throw std::invalid_argument("random_connected_subgraph: no component has " +
                                std::to_string(size) + " vertices");
  std::sort(starts.begin(), starts.end());

  Rng rng(seed);
  std::vector<VertexId> chosen{starts[rng.below(starts.size())]};
  std::unordered_set<VertexId> seen{chosen.front()};
  std::vector<VertexId> frontier;
  auto absorb = [&](VertexId v) {
    for (VertexId w : g.neighbors(v))
      if (seen.insert(w).second) frontier.push_back(w);
  };
  absorb(chosen.front());
  while (chosen.size() < size) {
    std::size_t pick = rng.below(frontier.size());
    VertexId v = frontier[pick];
    frontier[pick] = frontier.back();
    frontier.pop_back();
    chosen.push_back(v);
    absorb(v);
  }
  return VertexSet(std::move(chosen));
}

struct CommunityGraph {
  Graph graph;
  std::vector<VertexSet> communities;
};

struct CommunityGraphParams {
  VertexId n = 300;
  VertexId min_size = 25;
  VertexId max_size = 40;
  double extra_bridges = 0.0;  ///< bridges added per community beyond the spanning tree
};

namespace detail {

using EdgeList = std::vector<std::pair<VertexId, VertexId>>;

/// One connected community on [base, base + size). Kinds: 0 small-world
/// ring, 1 random geometric, 2 dense random, 3 hub-and-spoke.
inline void community_edges(int kind, VertexId base, VertexId size, Rng& rng, EdgeList& out) {
  auto add = [&](VertexId a, VertexId b) { out.emplace_back(base + a, base + b); };
  switch (kind) {
    case 0: {
      VertexId reach = 2 + static_cast<VertexId>(rng.below(3));
      double rewire = 0.1 + 0.2 * rng.uniform();
      for (VertexId i = 0; i < size; ++i)
        for (VertexId d = 1; d <= reach; ++d) {
          if (d > 1 && rng.bernoulli(rewire))
            add(i, static_cast<VertexId>(rng.below(size)));
          else
            add(i, (i + d) % size);
        }
      break;
    }
    case 1: {
      std::vector<double> x(size), y(size);
      for (VertexId i = 0; i < size; ++i) {
        x[i] = rng.uniform();
        y[i] = rng.uniform();
      }
      auto dist2 = [&](VertexId a, VertexId b) {
        return (x[a] - x[b]) * (x[a] - x[b]) + (y[a] - y[b]) * (y[a] - y[b]);
      };
      const double mean_degree = 5.0 + 5.0 * rng.uniform();
      const double r2 = mean_degree / (3.141592653589793 * size);
      for (VertexId i = 1; i < size; ++i) {  // link to nearest earlier point
        VertexId best = 0;
        for (VertexId j = 1; j < i; ++j)
          if (dist2(i, j) < dist2(i, best)) best = j;
        add(i, best);
      }
      for (VertexId i = 0; i < size; ++i)
        for (VertexId j = i + 1; j < size; ++j)
          if (dist2(i, j) < r2) add(i, j);
      break;
    }
    case 2: {
      for (VertexId i = 1; i < size; ++i) add(i, static_cast<VertexId>(rng.below(i)));
      double p = 0.3 + 0.3 * rng.uniform();
      for (VertexId i = 0; i < size; ++i)
        for (VertexId j = i + 1; j < size; ++j)
          if (rng.bernoulli(p)) add(i, j);
      break;
    }
    default: {
      VertexId hubs = 2 + static_cast<VertexId>(rng.below(3));
      for (VertexId i = 1; i < hubs; ++i) add(i, 0);
      for (VertexId i = hubs; i < size; ++i) {
        add(i, static_cast<VertexId>(rng.below(hubs)));
        if (rng.bernoulli(0.5)) add(i, static_cast<VertexId>(rng.below(hubs)));
        if (rng.bernoulli(0.3)) add(i, hubs + static_cast<VertexId>(rng.below(i - hubs + 1)));
      }
      break;
    }
  }
}

}  // namespace detail

/// Graph of connected communities with mixed internal structure, joined by
/// a random spanning tree of single bridge edges.
inline CommunityGraph community_graph(const CommunityGraphParams& p, std::uint64_t seed) {
  if (p.min_size < 1 || p.min_size > p.max_size || p.n < p.min_size)
    throw std::invalid_argument("community_graph: bad community sizes");
  Rng rng(seed);
  detail::EdgeList edges;
  CommunityGraph out;
  VertexId next = 0;
  // r vertices can be split into communities of allowed size
  auto splittable = [&p](VertexId r) {
    return r == 0 || (r + p.max_size - 1) / p.max_size <= r / p.min_size;
  };
  if (!splittable(p.n)) throw std::invalid_argument("community_graph: n cannot be split into sizes in range");
  while (next < p.n) {
    std::vector<VertexId> allowed;
    for (VertexId s = p.min_size; s <= std::min(p.max_size, p.n - next); ++s)
      if (splittable(p.n - next - s)) allowed.push_back(s);
    VertexId size = allowed[rng.below(allowed.size())];
    detail::community_edges(static_cast<int>(rng.below(4)), next, size, rng, edges);
    std::vector<VertexId> members(size);
    std::iota(members.begin(), members.end(), next);
    out.communities.emplace_back(std::move(members));
    next += size;
  }
  const auto& cs = out.communities;
  auto member = [&](std::size_t c) { return cs[c][rng.below(cs[c].size())]; };
  for (std::size_t c = 1; c < cs.size(); ++c) {
    VertexId a = member(c);
    edges.emplace_back(a, member(rng.below(c)));
  }
  auto extra = static_cast<std::size_t>(p.extra_bridges * static_cast<double>(cs.size()));
  for (std::size_t i = 0; i < extra; ++i) {
    VertexId a = member(rng.below(cs.size()));
    edges.emplace_back(a, member(rng.below(cs.size())));
  }
  out.graph = Graph::from_edges(p.n, edges);
  return out;
}

/// Disjoint union of `host` and `block` (block ids shifted by host.n()),
/// joined by `bridges` random edges. Returns the graph and the block's ids.
inline std::pair<Graph, VertexSet> plant_block(const Graph& host, const Graph& block,
                                               std::size_t bridges, std::uint64_t seed) {
  if (host.n() == 0 || block.n() == 0) throw std::invalid_argument("plant_block: empty graph");
  auto edges = host.edges();
  const VertexId shift = host.n();
  for (auto [u, v] : block.edges()) edges.emplace_back(u + shift, v + shift);
  Rng rng(seed);
  for (std::size_t i = 0; i < bridges; ++i) {
    VertexId a = static_cast<VertexId>(rng.below(host.n()));
    edges.emplace_back(a, shift + static_cast<VertexId>(rng.below(block.n())));
  }
  std::vector<VertexId> ids(block.n());
  std::iota(ids.begin(), ids.end(), shift);
  return {Graph::from_edges(host.n() + block.n(), edges), VertexSet(std::move(ids))};
}

/// 2m / (n (n - 1)).
inline double density(const Graph& g) {
  if (g.n() < 2) throw std::invalid_argument("density: graph needs at least 2 vertices");
  const double n = g.n();
  return 2.0 * static_cast<double>(g.m()) / (n * (n - 1.0));
}

struct RunConfig {
  LabelParams labels;
  MatchParams match;
  unsigned workers = 1;
  std::uint64_t seed = 1;

  void validate() const {
    labels.validate();
    match.validate();
    if (workers == 0) throw std::invalid_argument("worker count must be positive");
  }
};

class ParamMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DisconnectedQuery : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A target graph with its one-time preprocessing.
struct PreparedTarget {
  const Graph& graph;
  const LabelSet& labels;
  const KdIndex& index;
};

struct QueryRun {
  MatchResult result;
  double delta = 0.0;  ///< seconds spent labeling the query
  double tau = 0.0;    ///< seconds for the whole matching phase, delta included
};

inline QueryRun run_query(const PreparedTarget& target, const Graph& query, const RunConfig& cfg) {
  cfg.validate();
  if (target.labels.params != cfg.labels)
    throw ParamMismatch("index was built with different labeling parameters");
  if (target.labels.size() != target.graph.n() || target.index.size() != target.graph.n())
    throw ParamMismatch("index size does not match target graph");
  if (!is_connected(query)) throw DisconnectedQuery("query graph must be connected and non-empty");

  using clock = std::chrono::steady_clock;
  auto start = clock::now();
  QueryRun run;
  auto query_labels = label_all(query, cfg.labels, cfg.workers);
  run.delta = std::chrono::duration<double>(clock::now() - start).count();
  MatchContext ctx{target.graph, query, target.labels, query_labels};
  run.result = match_query(ctx, target.index, cfg.match);
  run.tau = std::chrono::duration<double>(clock::now() - start).count();
  return run;
}

struct ExperimentQuery {
  Graph graph;
  std::optional<VertexSet> planted;  ///< target vertices the query was cut from
};

struct ExperimentReport {
  std::size_t query_size = 0;
  double score = 0.0;
  std::size_t matched = 0;
  bool exact_match = false;
  bool in_pruned = false;
  std::optional<double> baseline;  ///< score against a random connected subgraph
  std::optional<double> density;   ///< density of the match, when |V*| >= 2
  double delta = 0.0;
  double tau = 0.0;
};

struct SuiteAggregate {
  std::size_t queries = 0;
  double mean_score = 0.0;
  double mean_baseline = 0.0;
  std::size_t baselines = 0;
  std::size_t exact_matches = 0;
  std::size_t in_pruned = 0;
  double mean_density = 0.0;
  std::size_t densities = 0;
  double mean_delta = 0.0;
  double mean_tau = 0.0;
};

inline SuiteAggregate aggregate(const std::vector<ExperimentReport>& reports) {
  SuiteAggregate a;
  a.queries = reports.size();
  for (const auto& r : reports) {
    a.mean_score += r.score;
    a.mean_delta += r.delta;
    a.mean_tau += r.tau;
    if (r.exact_match) ++a.exact_matches;
    if (r.in_pruned) ++a.in_pruned;
    if (r.baseline) {
      a.mean_baseline += *r.baseline;
      ++a.baselines;
    }
    if (r.density) {
      a.mean_density += *r.density;
      ++a.densities;
    }
  }
  if (a.queries) {
    a.mean_score /= static_cast<double>(a.queries);
    a.mean_delta /= static_cast<double>(a.queries);
    a.mean_tau /= static_cast<double>(a.queries);
  }
  if (a.baselines) a.mean_baseline /= static_cast<double>(a.baselines);
  if (a.densities) a.mean_density /= static_cast<double>(a.densities);
  return a;
}

/// Scores the query against a random connected target subgraph of equal size.
inline std::optional<double> random_baseline(const Graph& target, const Graph& query, int l,
                                             std::uint64_t seed) {
  try {
    auto vs = random_connected_subgraph(target, query.n(), seed);
    return match_score(query, target, vs, l);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

inline ExperimentReport run_experiment(const PreparedTarget& target, const ExperimentQuery& q,
                                       const RunConfig& cfg, bool with_baseline,
                                       std::uint64_t baseline_seed) {
  auto run = run_query(target, q.graph, cfg);
  ExperimentReport r;
  r.query_size = q.graph.n();
  r.score = run.result.score;
  r.matched = run.result.matched.size();
  if (q.planted) {
    r.exact_match = run.result.matched == *q.planted;
    r.in_pruned = run.result.pruned.includes(*q.planted);
  }
  if (with_baseline)
    r.baseline = random_baseline(target.graph, q.graph, cfg.labels.graphlet_size, baseline_seed);
  if (r.matched >= 2) r.density = density(induced_subgraph(target.graph, run.result.matched).graph);
  r.delta = run.delta;
  r.tau = run.tau;
  return r;
}

struct SuiteResult {
  std::vector<ExperimentReport> reports;
  SuiteAggregate summary;
};

/// Runs every query against one prepared target.
inline SuiteResult run_experiment_suite(const PreparedTarget& target,
                                        const std::vector<ExperimentQuery>& queries,
                                        const RunConfig& cfg, bool with_baseline = true) {
  SuiteResult out;
  for (std::size_t i = 0; i < queries.size(); ++i)
    out.reports.push_back(
        run_experiment(target, queries[i], cfg, with_baseline, derive_seed(cfg.seed, i)));
  out.summary = aggregate(out.reports);
  return out;
}

}  // namespace gsim
