#pragma once

// Query matching: candidate selection by label k-NN, neighborhood-weighted
// seed matching, heap-driven growth and Jaccard-based completion.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gsim/graph.hpp"
#include "gsim/graphlet.hpp"
#include "gsim/kdtree.hpp"
#include "gsim/labeling.hpp"
#include "gsim/matching.hpp"

namespace gsim {

struct MatchParams {
  std::size_t k = 10;    ///< nearest neighbors per query vertex
  double alpha = 0.3;    ///< power-mean exponent of the seed edge weight
  double h1 = 0.4;       ///< similarity floor while growing
  double h2 = 0.95;      ///< Jaccard floor while completing

  void validate() const {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    if (!(h1 >= 0.0 && h1 <= 1.0)) throw std::invalid_argument("h1 must lie in [0, 1]");
    if (!(h2 >= 0.0 && h2 <= 1.0)) throw std::invalid_argument("h2 must lie in [0, 1]");
  }

  friend bool operator==(const MatchParams&, const MatchParams&) = default;
};

/// Everything the matching phases read. Holds references only.
struct MatchContext {
  const Graph& target;
  const Graph& query;
  const LabelSet& target_labels;
  const LabelSet& query_labels;

  /// s(q, t) between a query vertex and a target vertex.
  double s(VertexId q, VertexId t) const {
    return similarity(query_labels[q], target_labels[t]);
  }
};

/// Selection-phase output: R_v per query vertex and their union R.
struct Candidates {
  std::vector<std::vector<VertexId>> per_query;                  ///< R_v, nearest first
  VertexSet pruned;                                              ///< R
  std::unordered_map<VertexId, std::vector<VertexId>> holders;  ///< t -> {q : t in R_q}, ascending

  static Candidates from_lists(std::vector<std::vector<VertexId>> lists) {
    Candidates c;
    c.per_query = std::move(lists);
    std::vector<VertexId> all;
    for (VertexId q = 0; q < c.per_query.size(); ++q)
      for (VertexId t : c.per_query[q]) {
        all.push_back(t);
        c.holders[t].push_back(q);
      }
    c.pruned = VertexSet(std::move(all));
    return c;
  }
};

inline Candidates select_candidates(const KdIndex& index, const LabelSet& query_labels,
                                    std::size_t k) {
  if (query_labels.dimension() != index.dimension())
    throw std::invalid_argument("select_candidates: label dimension mismatch");
  std::vector<std::vector<VertexId>> lists(query_labels.size());
  for (VertexId q = 0; q < query_labels.size(); ++q)
    for (const auto& nb : index.knn(query_labels[q], k)) lists[q].push_back(nb.id);
  return Candidates::from_lists(std::move(lists));
}

/// Seed edge weight for query vertex v and target vertex w:
///   ((s(v,w)^a + sum_{u in Q'} s(u)^a)^(1/a)) / (|Q'| + 1)
/// where Q' holds the other query vertices with a candidate z in w's closed
/// neighborhood and s(u) is the best s(u, z) among those candidates.
inline double lambda_weight(const MatchContext& ctx, const Candidates& cands, VertexId v,
                            VertexId w, double alpha) {
  std::map<VertexId, double> best;  // ordered so the sum is reproducible
  auto visit = [&](VertexId z) {
    auto it = cands.holders.find(z);
    if (it == cands.holders.end()) return;
    for (VertexId u : it->second) {
      if (u == v) continue;
      double s = ctx.s(u, z);
      auto [slot, inserted] = best.emplace(u, s);
      if (!inserted) slot->second = std::max(slot->second, s);
    }
  };
  visit(w);
  for (VertexId z : ctx.target.neighbors(w)) visit(z);

  double sum = std::pow(ctx.s(v, w), alpha);
  for (auto [u, s] : best) sum += std::pow(s, alpha);
  return std::pow(sum, 1.0 / alpha) / static_cast<double>(best.size() + 1);
}

struct SeedMatch {
  Matching matching;  ///< full optimum on (V(Q), R), left = query
  VertexSet target_side;                          ///< S_G
  VertexSet query_side;                           ///< S_Q
  std::vector<std::pair<VertexId, VertexId>> pairs;  ///< (query, target) with target in S_G
  bool empty() const noexcept { return pairs.empty(); }
};

inline BipartiteInstance seed_instance(const MatchContext& ctx, const Candidates& cands,
                                       double alpha) {
  BipartiteInstance inst;
  inst.left.resize(ctx.query.n());
  for (VertexId q = 0; q < ctx.query.n(); ++q) inst.left[q] = q;
  inst.right.assign(cands.pruned.begin(), cands.pruned.end());
  for (VertexId q = 0; q < cands.per_query.size(); ++q)
    for (VertexId t : cands.per_query[q])
      inst.edges.push_back({q, t, lambda_weight(ctx, cands, q, t, alpha)});
  return inst;
}

/// Optimal lambda-weighted matching, reduced to its largest connected
/// component in the target.
inline SeedMatch seed_match(const MatchContext& ctx, const Candidates& cands, double alpha) {
  SeedMatch seed;
  seed.matching = max_weight_bipartite_matching(seed_instance(ctx, cands, alpha));
  if (seed.matching.pairs.empty()) return seed;

  std::vector<VertexId> matched_targets;
  for (auto [q, t] : seed.matching.pairs) matched_targets.push_back(t);
  auto gm = induced_subgraph(ctx.target, VertexSet(std::move(matched_targets)));
  auto comps = connected_components(gm.graph);
  std::vector<VertexId> sg;
  for (VertexId local : comps.front()) sg.push_back(static_cast<VertexId>(gm.ids.external(local)));
  seed.target_side = VertexSet(std::move(sg));

  std::vector<VertexId> sq;
  for (auto [q, t] : seed.matching.pairs)
    if (seed.target_side.contains(t)) {
      seed.pairs.emplace_back(q, t);
      sq.push_back(q);
    }
  seed.query_side = VertexSet(std::move(sq));
  return seed;
}

/// One-to-one partial map F from query vertices to target vertices.
class PartialMatch {
 public:
  explicit PartialMatch(VertexId query_n) : to_target_(query_n) {}

  void add(VertexId q, VertexId t) {
    if (to_target_.at(q) || to_query_.count(t))
      throw std::logic_error("PartialMatch: pair breaks one-to-one mapping");
    to_target_[q] = t;
    to_query_.emplace(t, q);
    ++size_;
  }
  bool has_query(VertexId q) const { return to_target_.at(q).has_value(); }
  bool has_target(VertexId t) const { return to_query_.count(t) != 0; }
  std::optional<VertexId> target_of(VertexId q) const { return to_target_.at(q); }
  std::optional<VertexId> query_of(VertexId t) const {
    auto it = to_query_.find(t);
    if (it == to_query_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t size() const noexcept { return size_; }
  VertexId query_n() const noexcept { return static_cast<VertexId>(to_target_.size()); }

  /// (query, target) pairs ascending by query id.
  std::vector<std::pair<VertexId, VertexId>> pairs() const {
    std::vector<std::pair<VertexId, VertexId>> out;
    for (VertexId q = 0; q < to_target_.size(); ++q)
      if (to_target_[q]) out.emplace_back(q, *to_target_[q]);
    return out;
  }
  VertexSet targets() const {
    std::vector<VertexId> out;
    for (const auto& t : to_target_)
      if (t) out.push_back(*t);
    return VertexSet(std::move(out));
  }

 private:
  std::vector<std::optional<VertexId>> to_target_;
  std::unordered_map<VertexId, VertexId> to_query_;
  std::size_t size_ = 0;
};

/// Max-heap of candidate pairs keyed by s, with lazy deletion. Live entries
/// are one-to-one on both sides. Equal keys pop smaller query id first, then
/// smaller target id.
class CandidateHeap {
 public:
  struct Entry {
    double key;
    VertexId query;
    VertexId target;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  explicit CandidateHeap(VertexId query_n) : live_(query_n) {}

  bool has_query(VertexId q) const { return live_.at(q).has_value(); }
  bool has_target(VertexId t) const { return live_targets_.count(t) != 0; }
  double key(VertexId q) const { return live_.at(q)->key; }
  bool empty() const noexcept { return live_targets_.empty(); }
  std::size_t size() const noexcept { return live_targets_.size(); }

  void insert(VertexId q, VertexId t, double key) {
    if (has_query(q) || has_target(t)) throw std::logic_error("CandidateHeap: duplicate live entry");
    live_[q] = Entry{key, q, t};
    live_targets_.emplace(t, q);
    heap_.push(*live_[q]);
  }

  /// Rebinds q to (t, key); the previous partner is released.
  void replace(VertexId q, VertexId t, double key) {
    if (!has_query(q)) throw std::logic_error("CandidateHeap: replace of absent query");
    live_targets_.erase(live_[q]->target);
    live_[q].reset();
    insert(q, t, key);
  }

  std::optional<Entry> pop() {
    while (!heap_.empty()) {
      Entry e = heap_.top();
      heap_.pop();
      if (!live_[e.query] || !(*live_[e.query] == e)) continue;  // stale
      live_[e.query].reset();
      live_targets_.erase(e.target);
      return e;
    }
    return std::nullopt;
  }

  std::vector<Entry> live_entries() const {
    std::vector<Entry> out;
    for (const auto& e : live_)
      if (e) out.push_back(*e);
    return out;
  }

 private:
  struct Lower {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.key != b.key) return a.key < b.key;
      if (a.query != b.query) return a.query > b.query;
      return a.target > b.target;
    }
  };

  std::vector<std::optional<Entry>> live_;
  std::unordered_map<VertexId, VertexId> live_targets_;
  std::priority_queue<Entry, std::vector<Entry>, Lower> heap_;
};

struct GrowthStats {
  std::size_t seeded = 0;  ///< seed pairs that passed h1
  std::size_t popped = 0;
};

/// Incremental matching from the seed pairs (query, target). Each popped
/// pair extends F; unmatched query neighbors of the new query vertex are then
/// offered the best free target neighbor of the new target vertex.
/// `observer`, when given, is called after every pop with the state.
template <typename Observer>
PartialMatch grow_match(const MatchContext& ctx,
                        std::span<const std::pair<VertexId, VertexId>> seed_pairs, double h1,
                        GrowthStats* stats, Observer&& observer) {
  PartialMatch f(ctx.query.n());
  CandidateHeap heap(ctx.query.n());
  GrowthStats local;
  for (auto [q, t] : seed_pairs) {
    double s = ctx.s(q, t);
    if (s >= h1) {
      heap.insert(q, t, s);
      ++local.seeded;
    }
  }

  while (auto top = heap.pop()) {
    const VertexId w = top->query, v = top->target;
    f.add(w, v);
    ++local.popped;

    for (VertexId y : ctx.query.neighbors(w)) {
      if (f.has_query(y)) continue;
      std::optional<VertexId> best;
      double best_s = -1.0;
      for (VertexId x : ctx.target.neighbors(v)) {
        if (f.has_target(x) || heap.has_target(x)) continue;
        double s = ctx.s(y, x);
        if (s > best_s) {
          best_s = s;
          best = x;
        }
      }
      if (!best) continue;
      if (!heap.has_query(y)) {
        if (best_s >= h1) heap.insert(y, *best, best_s);
      } else if (best_s > heap.key(y)) {
        heap.replace(y, *best, best_s);
      }
    }
    observer(f, heap);
  }
  if (stats) *stats = local;
  return f;
}

inline PartialMatch grow_match(const MatchContext& ctx,
                               std::span<const std::pair<VertexId, VertexId>> seed_pairs,
                               double h1, GrowthStats* stats = nullptr) {
  return grow_match(ctx, seed_pairs, h1, stats, [](const PartialMatch&, const CandidateHeap&) {});
}

/// |a ∩ b| / |a ∪ b| over sorted ranges; 0 when both are empty.
inline double jaccard(std::span<const VertexId> a, std::span<const VertexId> b) {
  std::size_t common = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  std::size_t uni = a.size() + b.size() - common;
  return uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
}

/// Matches leftover query vertices to unmatched target neighbors of F using
/// the Jaccard overlap of their already-matched neighborhoods. Returns the
/// number of pairs added.
inline std::size_t complete_match(const MatchContext& ctx, PartialMatch& f, double h2) {
  std::vector<VertexId> frontier;
  for (auto [q, t] : f.pairs())
    for (VertexId x : ctx.target.neighbors(t))
      if (!f.has_target(x)) frontier.push_back(x);
  VertexSet xs(std::move(frontier));

  std::vector<VertexId> ys;
  for (VertexId q = 0; q < ctx.query.n(); ++q)
    if (!f.has_query(q)) ys.push_back(q);
  if (xs.empty() || ys.empty()) return 0;

  // Z'_x: query partners of x's matched neighbors; Z_y: y's matched neighbors
  std::vector<std::vector<VertexId>> zx(xs.size()), zy(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (VertexId nb : ctx.target.neighbors(xs[i]))
      if (auto q = f.query_of(nb)) zx[i].push_back(*q);
    std::sort(zx[i].begin(), zx[i].end());
  }
  for (std::size_t j = 0; j < ys.size(); ++j)
    for (VertexId nb : ctx.query.neighbors(ys[j]))
      if (f.has_query(nb)) zy[j].push_back(nb);

  BipartiteInstance inst;
  inst.left.assign(xs.begin(), xs.end());
  inst.right = ys;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j) {
      double c = jaccard(zx[i], zy[j]);
      if (c >= h2) inst.edges.push_back({xs[i], ys[j], c});
    }
  auto m = max_weight_bipartite_matching(inst);
  for (auto [x, y] : m.pairs) f.add(y, x);
  return m.pairs.size();
}

struct MatchStats {
  std::size_t candidates = 0;  ///< |R|
  std::size_t seed = 0;        ///< |S_G|
  std::size_t grown = 0;       ///< pairs added while growing
  std::size_t completed = 0;   ///< pairs added while completing
};

struct MatchResult {
  std::vector<std::pair<VertexId, VertexId>> mapping;  ///< (query, target), ascending by query
  VertexSet matched;                                   ///< V*
  double score = 0.0;                                  ///< K(Q, G*)
  MatchStats stats;
  VertexSet pruned;                                    ///< R, kept for reporting
};

/// Graphlet kernel between the query and the target subgraph induced on `vs`.
inline double match_score(const Graph& query, const Graph& target, const VertexSet& vs, int l) {
  auto fq = graphlet_vector(query, l);
  auto fg = graphlet_vector(induced_subgraph(target, vs).graph, l);
  return kernel(fq, fg);
}

/// Runs selection, seeding, growth and completion for precomputed labels.
inline MatchResult match_query(const MatchContext& ctx, const KdIndex& index,
                               const MatchParams& params) {
  params.validate();
  if (ctx.query_labels.params != ctx.target_labels.params)
    throw std::invalid_argument("match_query: query and target labels use different parameters");
  MatchResult result;
  auto cands = select_candidates(index, ctx.query_labels, params.k);
  result.stats.candidates = cands.pruned.size();
  auto seed = seed_match(ctx, cands, params.alpha);
  result.stats.seed = seed.target_side.size();
  auto f = grow_match(ctx, seed.pairs, params.h1);
  result.stats.grown = f.size();
  result.stats.completed = complete_match(ctx, f, params.h2);
  result.mapping = f.pairs();
  result.matched = f.targets();
  result.score = match_score(ctx.query, ctx.target, result.matched,
                             ctx.query_labels.params.graphlet_size);
  result.pruned = std::move(cands.pruned);
  return result;
}

}  // namespace gsim
