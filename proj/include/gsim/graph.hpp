#pragma once

// Undirected simple graphs in compressed sparse row form, edge-list
// ingestion, and the traversal primitives shared by the rest of gsim.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace gsim {

using VertexId = std::uint32_t;
using ExternalId = std::int64_t;

/// Raised when an edge-list stream cannot be parsed.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Sorted, duplicate-free set of vertex ids.
class VertexSet {
 public:
  VertexSet() = default;

  /// Sorts and deduplicates `ids`.
  explicit VertexSet(std::vector<VertexId> ids) : ids_(std::move(ids)) {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  }

  static VertexSet range(VertexId n) {
    std::vector<VertexId> ids(n);
    std::iota(ids.begin(), ids.end(), VertexId{0});
    return VertexSet(std::move(ids));
  }

  bool contains(VertexId v) const {
    return std::binary_search(ids_.begin(), ids_.end(), v);
  }
  bool includes(const VertexSet& other) const {
    return std::includes(ids_.begin(), ids_.end(), other.ids_.begin(),
                         other.ids_.end());
  }

  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  VertexId operator[](std::size_t i) const { return ids_[i]; }
  auto begin() const noexcept { return ids_.begin(); }
  auto end() const noexcept { return ids_.end(); }
  std::span<const VertexId> ids() const noexcept { return ids_; }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  std::vector<VertexId> ids_;
};

/// Bijection between external (file) ids and dense internal ids.
class IdMap {
 public:
  IdMap() = default;

  /// Builds the identity map on [0, n).
  static IdMap identity(VertexId n) {
    IdMap m;
    for (VertexId v = 0; v < n; ++v) m.add(static_cast<ExternalId>(v));
    return m;
  }

  /// Appends `ext` as the next internal id; `ext` must be new.
  VertexId add(ExternalId ext) {
    auto [it, inserted] =
        forward_.emplace(ext, static_cast<VertexId>(backward_.size()));
    if (!inserted) throw std::invalid_argument("duplicate external id");
    backward_.push_back(ext);
    return it->second;
  }

  std::size_t size() const noexcept { return backward_.size(); }
  ExternalId external(VertexId v) const { return backward_.at(v); }
  bool has(ExternalId ext) const { return forward_.count(ext) != 0; }
  VertexId internal(ExternalId ext) const {
    auto it = forward_.find(ext);
    if (it == forward_.end())
      throw std::invalid_argument("unknown external id " + std::to_string(ext));
    return it->second;
  }
  std::span<const ExternalId> externals() const noexcept { return backward_; }

 private:
  std::unordered_map<ExternalId, VertexId> forward_;
  std::vector<ExternalId> backward_;
};

/// Immutable undirected simple graph. Neighbor lists are sorted.
class Graph {
 public:
  Graph() : offsets_(1, 0) {}

  /// Builds a graph on `n` vertices. Self-loops and duplicate edges are
  /// dropped; endpoints must be < n.
  static Graph from_edges(VertexId n,
                          std::span<const std::pair<VertexId, VertexId>> edges) {
    std::vector<std::uint64_t> degree(n + 1, 0);
    for (auto [u, v] : edges) {
      if (u >= n || v >= n) throw std::invalid_argument("edge endpoint out of range");
      if (u == v) continue;
      ++degree[u];
      ++degree[v];
    }
    Graph g;
    g.offsets_.assign(n + 1, 0);
    for (VertexId v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + degree[v];
    g.neighbors_.resize(g.offsets_[n]);
    std::vector<std::uint64_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (auto [u, v] : edges) {
      if (u == v) continue;
      g.neighbors_[fill[u]++] = v;
      g.neighbors_[fill[v]++] = u;
    }
    // sort + dedup each row, then compact
    std::uint64_t write = 0;
    std::vector<std::uint64_t> offsets(n + 1, 0);
    for (VertexId v = 0; v < n; ++v) {
      auto first = g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
      auto last = g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
      std::sort(first, last);
      last = std::unique(first, last);
      for (auto it = first; it != last; ++it) g.neighbors_[write++] = *it;
      offsets[v + 1] = write;
    }
    g.neighbors_.resize(write);
    g.neighbors_.shrink_to_fit();
    g.offsets_ = std::move(offsets);
    return g;
  }

  static Graph from_edges(VertexId n,
                          const std::vector<std::pair<VertexId, VertexId>>& edges) {
    return from_edges(n, std::span<const std::pair<VertexId, VertexId>>(edges));
  }

  VertexId n() const noexcept { return static_cast<VertexId>(offsets_.size() - 1); }
  std::uint64_t m() const noexcept { return neighbors_.size() / 2; }

  std::span<const VertexId> neighbors(VertexId v) const {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }
  std::size_t degree(VertexId v) const {
    return static_cast<std::size_t>(offsets_[v + 1] - offsets_[v]);
  }
  bool has_edge(VertexId u, VertexId v) const {
    if (degree(u) > degree(v)) std::swap(u, v);
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  /// Each undirected edge once, as (u, v) with u < v, in ascending order.
  std::vector<std::pair<VertexId, VertexId>> edges() const {
    std::vector<std::pair<VertexId, VertexId>> out;
    out.reserve(m());
    for (VertexId u = 0; u < n(); ++u)
      for (VertexId v : neighbors(u))
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  std::span<const std::uint64_t> offsets() const noexcept { return offsets_; }
  std::span<const VertexId> adjacency() const noexcept { return neighbors_; }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::uint64_t> offsets_;
  std::vector<VertexId> neighbors_;
};

struct ParsedGraph {
  Graph graph;
  IdMap ids;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n\f\v";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    if (i >= s.size()) break;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline bool parse_int(std::string_view tok, ExternalId& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc{} && ptr == tok.data() + tok.size();
}

}  // namespace detail

/// Reads a whitespace-separated edge list. Lines whose first non-blank
/// character is '#' are comments. Internal ids follow ascending external id
/// order, so re-serializing and re-parsing reproduces the same structure.
inline ParsedGraph parse_edge_list(std::istream& in) {
  std::vector<std::pair<ExternalId, ExternalId>> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto tokens = detail::split_ws(body);
    if (tokens.size() != 2)
      throw ParseError(line_no, "expected 2 tokens, found " + std::to_string(tokens.size()));
    ExternalId a = 0, b = 0;
    if (!detail::parse_int(tokens[0], a))
      throw ParseError(line_no, "not an integer: '" + std::string(tokens[0]) + "'");
    if (!detail::parse_int(tokens[1], b))
      throw ParseError(line_no, "not an integer: '" + std::string(tokens[1]) + "'");
    raw.emplace_back(a, b);
  }

  std::vector<ExternalId> ext;
  ext.reserve(raw.size() * 2);
  for (auto [a, b] : raw) {
    ext.push_back(a);
    ext.push_back(b);
  }
  std::sort(ext.begin(), ext.end());
  ext.erase(std::unique(ext.begin(), ext.end()), ext.end());
  if (ext.size() > std::numeric_limits<VertexId>::max())
    throw ParseError(line_no, "too many vertices");

  ParsedGraph out;
  for (ExternalId e : ext) out.ids.add(e);
  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(raw.size());
  auto rank = [&](ExternalId e) {
    return static_cast<VertexId>(std::lower_bound(ext.begin(), ext.end(), e) - ext.begin());
  };
  for (auto [a, b] : raw) edges.emplace_back(rank(a), rank(b));
  out.graph = Graph::from_edges(static_cast<VertexId>(ext.size()), edges);
  return out;
}

/// Writes `g` as an edge list using external ids. Isolated vertices are
/// written as self-loop lines so they survive a re-parse.
inline void write_edge_list(std::ostream& out, const Graph& g, const IdMap& ids) {
  out << "# n=" << g.n() << " m=" << g.m() << '\n';
  for (VertexId u = 0; u < g.n(); ++u) {
    if (g.degree(u) == 0) {
      out << ids.external(u) << ' ' << ids.external(u) << '\n';
      continue;
    }
    for (VertexId v : g.neighbors(u))
      if (u < v) out << ids.external(u) << ' ' << ids.external(v) << '\n';
  }
}

inline void write_edge_list(std::ostream& out, const Graph& g) {
  write_edge_list(out, g, IdMap::identity(g.n()));
}

/// Reusable visit marks for repeated BFS over the same graph.
class BfsScratch {
 public:
  explicit BfsScratch(VertexId n) : stamp_(n, 0), depth_(n, 0) {}

 private:
  friend VertexSet bfs_neighborhood(const Graph&, VertexId, std::uint32_t, BfsScratch&);
  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint32_t> depth_;
  std::uint32_t epoch_ = 0;
};

/// All vertices within `depth` hops of `v`, including `v`.
inline VertexSet bfs_neighborhood(const Graph& g, VertexId v, std::uint32_t depth,
                                  BfsScratch& scratch) {
  if (v >= g.n()) throw std::invalid_argument("bfs_neighborhood: vertex out of range");
  if (scratch.stamp_.size() != g.n()) throw std::invalid_argument("bfs_neighborhood: scratch sized for another graph");
  if (++scratch.epoch_ == 0) {
    std::fill(scratch.stamp_.begin(), scratch.stamp_.end(), 0);
    scratch.epoch_ = 1;
  }
  const auto epoch = scratch.epoch_;
  std::vector<VertexId> reached{v};
  scratch.stamp_[v] = epoch;
  scratch.depth_[v] = 0;
  for (std::size_t head = 0; head < reached.size(); ++head) {
    VertexId u = reached[head];
    auto du = scratch.depth_[u];
    if (du == depth) continue;
    for (VertexId w : g.neighbors(u)) {
      if (scratch.stamp_[w] == epoch) continue;
      scratch.stamp_[w] = epoch;
      scratch.depth_[w] = du + 1;
      reached.push_back(w);
    }
  }
  return VertexSet(std::move(reached));
}

inline VertexSet bfs_neighborhood(const Graph& g, VertexId v, std::uint32_t depth) {
  if (v >= g.n()) throw std::invalid_argument("bfs_neighborhood: vertex out of range");
  BfsScratch scratch(g.n());
  return bfs_neighborhood(g, v, depth, scratch);
}

struct InducedSubgraph {
  Graph graph;
  IdMap ids;  ///< external id of local vertex i is the parent vertex id
};

/// Subgraph of `g` on `s`; local vertex i corresponds to `s[i]`.
inline InducedSubgraph induced_subgraph(const Graph& g, const VertexSet& s) {
  for (VertexId v : s)
    if (v >= g.n()) throw std::invalid_argument("induced_subgraph: vertex out of range");
  InducedSubgraph out;
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (std::size_t i = 0; i < s.size(); ++i) {
    out.ids.add(s[i]);
    // merge-intersect neighbor list with s, keeping only j > i
    auto nb = g.neighbors(s[i]);
    auto it = std::upper_bound(nb.begin(), nb.end(), s[i]);
    std::size_t j = i + 1;
    while (it != nb.end() && j < s.size()) {
      if (*it < s[j]) {
        ++it;
      } else if (s[j] < *it) {
        ++j;
      } else {
        edges.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(j));
        ++it;
        ++j;
      }
    }
  }
  out.graph = Graph::from_edges(static_cast<VertexId>(s.size()), edges);
  return out;
}

/// Components ordered by decreasing size, ties by smallest member.
inline std::vector<VertexSet> connected_components(const Graph& g) {
  std::vector<VertexSet> comps;
  std::vector<char> seen(g.n(), 0);
  for (VertexId s = 0; s < g.n(); ++s) {
    if (seen[s]) continue;
    std::vector<VertexId> members{s};
    seen[s] = 1;
    for (std::size_t head = 0; head < members.size(); ++head)
      for (VertexId w : g.neighbors(members[head]))
        if (!seen[w]) {
          seen[w] = 1;
          members.push_back(w);
        }
    comps.emplace_back(std::move(members));
  }
  // discovery order already sorts by min member; stable sort keeps that
  std::stable_sort(comps.begin(), comps.end(),
                   [](const VertexSet& a, const VertexSet& b) { return a.size() > b.size(); });
  return comps;
}

inline bool is_connected(const Graph& g) {
  return g.n() > 0 && connected_components(g).size() == 1;
}

}  // namespace gsim
