#pragma once

// Connected graphlets of size 3-5: catalog, classification, exact induced
// counting and the graphlet kernel.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsim/graph.hpp"

namespace gsim {

inline constexpr int kMinGraphletSize = 3;
inline constexpr int kMaxGraphletSize = 5;

inline void check_graphlet_size(int l) {
  if (l < kMinGraphletSize || l > kMaxGraphletSize)
    throw std::invalid_argument("graphlet size must be 3, 4 or 5, got " + std::to_string(l));
}

/// Bit position of vertex pair (i, j), i < j, in an l-vertex edge mask.
/// Pairs are numbered lexicographically: (0,1), (0,2), ..., (l-2,l-1).
constexpr int pair_bit(int i, int j) {
  if (i > j) std::swap(i, j);
  int bit = 0;
  for (int a = 0; a < i; ++a) bit += kMaxGraphletSize - 1 - a;
  return bit + (j - i - 1);
}

/// Non-isomorphic connected graphs on l vertices, ordered by
/// (edge count, canonical mask). The canonical mask of a graph is the
/// largest edge mask over all vertex orderings.
class GraphletCatalog {
 public:
  explicit GraphletCatalog(int l) : l_(l) {
    check_graphlet_size(l);
    const std::uint32_t masks = 1u << kPairs;
    std::vector<std::uint32_t> canonical(masks, 0);
    std::vector<std::uint32_t> reps;
    for (std::uint32_t mask = 0; mask < masks; ++mask) {
      if (!uses_only_first(mask, l)) continue;
      if (!connected(mask, l)) continue;
      canonical[mask] = canonicalize(mask, l);
      if (canonical[mask] == mask) reps.push_back(mask);
    }
    std::sort(reps.begin(), reps.end(), [](std::uint32_t a, std::uint32_t b) {
      int ea = std::popcount(a), eb = std::popcount(b);
      return ea != eb ? ea < eb : a < b;
    });
    classes_ = reps;
    lookup_.assign(masks, -1);
    for (std::uint32_t mask = 0; mask < masks; ++mask) {
      if (!uses_only_first(mask, l) || !connected(mask, l)) continue;
      auto it = std::find(classes_.begin(), classes_.end(), canonical[mask]);
      lookup_[mask] = static_cast<int>(it - classes_.begin());
    }
    static constexpr std::array<std::size_t, 3> expected{2, 6, 21};
    if (classes_.size() != expected[static_cast<std::size_t>(l - kMinGraphletSize)])
      throw std::logic_error("graphlet catalog has wrong cardinality for l=" + std::to_string(l));
  }

  int size() const noexcept { return l_; }
  std::size_t dimension() const noexcept { return classes_.size(); }
  /// Canonical edge masks of the classes, in catalog order.
  const std::vector<std::uint32_t>& classes() const noexcept { return classes_; }

  /// Class index of an l-vertex edge mask, or -1 when the mask is disconnected.
  int lookup(std::uint32_t mask) const { return lookup_[mask]; }

  /// Largest mask over all relabelings of the first l vertices.
  static std::uint32_t canonicalize(std::uint32_t mask, int l) {
    std::array<int, kMaxGraphletSize> perm{};
    std::iota(perm.begin(), perm.begin() + l, 0);
    std::uint32_t best = 0;
    do {
      std::uint32_t out = 0;
      for (int i = 0; i < l; ++i)
        for (int j = i + 1; j < l; ++j)
          if (mask >> pair_bit(i, j) & 1u) out |= 1u << pair_bit(perm[i], perm[j]);
      best = std::max(best, out);
    } while (std::next_permutation(perm.begin(), perm.begin() + l));
    return best;
  }

  static bool connected(std::uint32_t mask, int l) {
    std::uint32_t reached = 1, frontier = 1;
    while (frontier) {
      std::uint32_t next = 0;
      for (int i = 0; i < l; ++i) {
        if (!(frontier >> i & 1u)) continue;
        for (int j = 0; j < l; ++j)
          if (i != j && (mask >> pair_bit(i, j) & 1u)) next |= 1u << j;
      }
      frontier = next & ~reached;
      reached |= next;
    }
    return reached == (1u << l) - 1;
  }

 private:
  static constexpr int kPairs = kMaxGraphletSize * (kMaxGraphletSize - 1) / 2;

  static bool uses_only_first(std::uint32_t mask, int l) {
    for (int i = 0; i < kMaxGraphletSize; ++i)
      for (int j = i + 1; j < kMaxGraphletSize; ++j)
        if ((i >= l || j >= l) && (mask >> pair_bit(i, j) & 1u)) return false;
    return true;
  }

  int l_;
  std::vector<std::uint32_t> classes_;
  std::vector<int> lookup_;
};

/// Shared immutable catalog for graphlet size l.
inline const GraphletCatalog& catalog(int l) {
  check_graphlet_size(l);
  static const GraphletCatalog c3(3), c4(4), c5(5);
  return l == 3 ? c3 : l == 4 ? c4 : c5;
}

using GraphletCounts = std::vector<std::uint64_t>;

/// L2-normalized graphlet frequencies (or all zeros).
struct GraphletVector {
  int l = 4;
  std::vector<double> values;

  std::size_t dimension() const noexcept { return values.size(); }
  bool is_zero() const {
    return std::all_of(values.begin(), values.end(), [](double x) { return x == 0.0; });
  }

  static GraphletVector zero(int l) {
    return {l, std::vector<double>(catalog(l).dimension(), 0.0)};
  }
  static GraphletVector from_counts(int l, const GraphletCounts& counts) {
    GraphletVector f{l, std::vector<double>(counts.size(), 0.0)};
    double sq = 0.0;
    for (auto c : counts) sq += static_cast<double>(c) * static_cast<double>(c);
    if (sq == 0.0) return f;
    const double norm = std::sqrt(sq);
    for (std::size_t i = 0; i < counts.size(); ++i)
      f.values[i] = static_cast<double>(counts[i]) / norm;
    return f;
  }

  friend bool operator==(const GraphletVector&, const GraphletVector&) = default;
};

/// Catalog index of a connected graph with 3 to 5 vertices.
inline int classify(const Graph& g) {
  const int l = static_cast<int>(g.n());
  if (l < kMinGraphletSize || l > kMaxGraphletSize)
    throw std::invalid_argument("classify: graph must have 3 to 5 vertices");
  std::uint32_t mask = 0;
  for (auto [u, v] : g.edges()) mask |= 1u << pair_bit(static_cast<int>(u), static_cast<int>(v));
  int idx = catalog(l).lookup(mask);
  if (idx < 0) throw std::invalid_argument("classify: graph is disconnected");
  return idx;
}

namespace detail {

/// Constant-time adjacency test for small graphs; binary search otherwise.
class AdjacencyTest {
 public:
  explicit AdjacencyTest(const Graph& g) : g_(g) {
    if (g.n() <= kDenseLimit) {
      words_ = (g.n() + 63) / 64;
      bits_.assign(static_cast<std::size_t>(g.n()) * words_, 0);
      for (VertexId u = 0; u < g.n(); ++u)
        for (VertexId v : g.neighbors(u)) bits_[u * words_ + v / 64] |= 1ull << (v % 64);
    }
  }
  bool operator()(VertexId u, VertexId v) const {
    if (!bits_.empty()) return bits_[u * words_ + v / 64] >> (v % 64) & 1ull;
    return g_.has_edge(u, v);
  }

 private:
  static constexpr VertexId kDenseLimit = 4096;
  const Graph& g_;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

}  // namespace detail

/// Induced counts of each connected l-graphlet in `g`, by ESU enumeration:
/// every connected l-subset is reached exactly once from its smallest vertex.
inline GraphletCounts count_graphlets(const Graph& g, int l) {
  const auto& cat = catalog(l);
  GraphletCounts counts(cat.dimension(), 0);
  if (g.n() < static_cast<VertexId>(l)) return counts;

  detail::AdjacencyTest adj(g);
  std::array<VertexId, kMaxGraphletSize> sub{};
  std::array<std::vector<VertexId>, kMaxGraphletSize> ext;

  // Adds the exclusive neighbors of w (relative to sub[0..size)) to out.
  auto exclusive = [&](VertexId root, VertexId w, int size, std::vector<VertexId>& out) {
    for (VertexId u : g.neighbors(w)) {
      if (u <= root) continue;
      bool blocked = false;
      for (int i = 0; i < size && !blocked; ++i) blocked = (u == sub[i]) || adj(u, sub[i]);
      if (!blocked) out.push_back(u);
    }
  };

  auto extend = [&](auto&& self, VertexId root, int size, std::uint32_t mask) -> void {
    auto& frontier = ext[static_cast<std::size_t>(size)];
    while (!frontier.empty()) {
      VertexId w = frontier.back();
      frontier.pop_back();
      std::uint32_t next_mask = mask;
      for (int i = 0; i < size; ++i)
        if (adj(w, sub[i])) next_mask |= 1u << pair_bit(i, size);
      if (size + 1 == l) {
        ++counts[static_cast<std::size_t>(cat.lookup(next_mask))];
        continue;
      }
      auto& next = ext[static_cast<std::size_t>(size + 1)];
      next.assign(frontier.begin(), frontier.end());
      exclusive(root, w, size, next);
      sub[static_cast<std::size_t>(size)] = w;
      self(self, root, size + 1, next_mask);
    }
  };

  for (VertexId v = 0; v < g.n(); ++v) {
    sub[0] = v;
    ext[1].clear();
    for (VertexId u : g.neighbors(v))
      if (u > v) ext[1].push_back(u);
    extend(extend, v, 1, 0u);
  }
  return counts;
}

/// Reference counter that scans every l-subset. Test use only; n <= 14.
inline GraphletCounts count_graphlets_oracle(const Graph& g, int l) {
  const auto& cat = catalog(l);
  if (g.n() > 14) throw std::invalid_argument("count_graphlets_oracle: n must be <= 14");
  GraphletCounts counts(cat.dimension(), 0);
  const int n = static_cast<int>(g.n());
  if (n < l) return counts;
  std::vector<int> pick(static_cast<std::size_t>(l));
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    std::uint32_t mask = 0;
    for (int i = 0; i < l; ++i)
      for (int j = i + 1; j < l; ++j)
        if (g.has_edge(static_cast<VertexId>(pick[i]), static_cast<VertexId>(pick[j])))
          mask |= 1u << pair_bit(i, j);
    if (int idx = cat.lookup(mask); idx >= 0) ++counts[static_cast<std::size_t>(idx)];
    int i = l - 1;
    while (i >= 0 && pick[i] == n - l + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < l; ++j) pick[j] = pick[j - 1] + 1;
  }
  return counts;
}

inline GraphletVector graphlet_vector(const Graph& g, int l) {
  return GraphletVector::from_counts(l, count_graphlets(g, l));
}

/// Dot product of two graphlet vectors, clamped to [0, 1].
inline double kernel(const GraphletVector& a, const GraphletVector& b) {
  if (a.l != b.l || a.dimension() != b.dimension())
    throw std::invalid_argument("kernel: graphlet vectors have different sizes");
  double dot = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) dot += a.values[i] * b.values[i];
  return std::clamp(dot, 0.0, 1.0);
}

}  // namespace gsim
