#pragma once

// Per-vertex labels: the graphlet vector of the subgraph induced by a
// vertex's depth-t BFS neighborhood.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "gsim/graph.hpp"
#include "gsim/graphlet.hpp"

namespace gsim {

struct LabelParams {
  std::uint32_t depth = 2;  ///< BFS depth t
  int graphlet_size = 4;    ///< l

  void validate() const {
    if (depth < 1) throw std::invalid_argument("BFS depth must be >= 1");
    check_graphlet_size(graphlet_size);
  }
  std::size_t dimension() const { return catalog(graphlet_size).dimension(); }

  friend bool operator==(const LabelParams&, const LabelParams&) = default;
};

/// FNV-1a over the vertex count and CSR adjacency.
inline std::uint64_t fingerprint(const Graph& g) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::uint64_t word, int bytes) {
    for (int i = 0; i < bytes; ++i) {
      h ^= (word >> (8 * i)) & 0xffu;
      h *= 0x100000001b3ull;
    }
  };
  mix(g.n(), 8);
  mix(g.m(), 8);
  for (auto off : g.offsets()) mix(off, 8);
  for (auto v : g.adjacency()) mix(v, 4);
  return h;
}

struct LabelSet {
  LabelParams params;
  std::uint64_t fingerprint = 0;
  std::vector<GraphletVector> labels;  ///< indexed by vertex id

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t dimension() const { return params.dimension(); }
  const GraphletVector& operator[](VertexId v) const { return labels[v]; }

  friend bool operator==(const LabelSet&, const LabelSet&) = default;
};

inline GraphletVector vertex_label(const Graph& g, VertexId v, const LabelParams& p,
                                   BfsScratch& scratch) {
  auto hood = bfs_neighborhood(g, v, p.depth, scratch);
  if (hood.size() < static_cast<std::size_t>(p.graphlet_size))
    return GraphletVector::zero(p.graphlet_size);
  return graphlet_vector(induced_subgraph(g, hood).graph, p.graphlet_size);
}

inline GraphletVector vertex_label(const Graph& g, VertexId v, const LabelParams& p) {
  p.validate();
  if (v >= g.n()) throw std::invalid_argument("vertex_label: vertex out of range");
  BfsScratch scratch(g.n());
  return vertex_label(g, v, p, scratch);
}

/// Labels every vertex using `workers` threads. Output is independent of the
/// worker count: slot v is written only by the thread that claimed v.
inline LabelSet label_all(const Graph& g, const LabelParams& p, unsigned workers = 1) {
  p.validate();
  if (workers == 0) throw std::invalid_argument("label_all: worker count must be positive");
  LabelSet out;
  out.params = p;
  out.fingerprint = fingerprint(g);
  out.labels.resize(g.n());

  constexpr VertexId kChunk = 32;
  std::atomic<VertexId> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    try {
      BfsScratch scratch(g.n());
      for (;;) {
        VertexId begin = next.fetch_add(kChunk);
        if (begin >= g.n()) break;
        VertexId end = std::min<VertexId>(g.n(), begin + kChunk);
        for (VertexId v = begin; v < end; ++v) out.labels[v] = vertex_label(g, v, p, scratch);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  workers = std::min<unsigned>(workers, std::max<VertexId>(1, g.n()));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

/// s(u, v): dot product of two vertex labels.
inline double similarity(const GraphletVector& a, const GraphletVector& b) {
  return kernel(a, b);
}

}  // namespace gsim
