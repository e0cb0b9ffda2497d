#pragma once

// Exact maximum-weight bipartite matching (not necessarily perfect).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gsim/graph.hpp"

namespace gsim {

struct WeightedEdge {
  VertexId left;
  VertexId right;
  double weight;
};

struct BipartiteInstance {
  std::vector<VertexId> left;
  std::vector<VertexId> right;
  std::vector<WeightedEdge> edges;
};

struct Matching {
  std::vector<std::pair<VertexId, VertexId>> pairs;  ///< (left, right), ascending by left
  double weight = 0.0;
};

namespace detail {

/// Minimum-cost assignment of every row to a distinct column, rows <= cols.
/// Hungarian method with potentials, O(rows^2 * cols). Returns the column
/// assigned to each row.
inline std::vector<std::size_t> min_cost_assignment(const std::vector<double>& cost,
                                                    std::size_t rows, std::size_t cols) {
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based arrays; column 0 is the virtual source.
  std::vector<double> u(rows + 1, 0.0), v(cols + 1, 0.0);
  std::vector<std::size_t> owner(cols + 1, 0), way(cols + 1, 0);
  std::vector<double> minv(cols + 1);
  std::vector<char> used(cols + 1);
  for (std::size_t i = 1; i <= rows; ++i) {
    owner[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      std::size_t i0 = owner[j0], j1 = 0;
      double delta = inf;
      for (std::size_t j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        double cur = cost[(i0 - 1) * cols + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      std::size_t j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> assigned(rows, 0);
  for (std::size_t j = 1; j <= cols; ++j)
    if (owner[j] != 0) assigned[owner[j] - 1] = j - 1;
  return assigned;
}

}  // namespace detail

/// Maximum total weight matching. Weights must be finite and non-negative.
/// Missing edges are modelled as zero-cost dummy assignments that are dropped
/// from the result, so the optimum need not be perfect.
inline Matching max_weight_bipartite_matching(const BipartiteInstance& inst) {
  std::map<VertexId, std::size_t> left_pos, right_pos;
  for (auto id : inst.left)
    if (!left_pos.emplace(id, left_pos.size()).second)
      throw std::invalid_argument("bipartite instance: duplicate left id");
  for (auto id : inst.right)
    if (!right_pos.emplace(id, right_pos.size()).second)
      throw std::invalid_argument("bipartite instance: duplicate right id");

  const std::size_t nl = inst.left.size(), nr = inst.right.size();
  const bool transpose = nl > nr;
  const std::size_t rows = transpose ? nr : nl, cols = transpose ? nl : nr;
  std::vector<double> weight(rows * cols, 0.0);
  std::vector<char> present(rows * cols, 0);
  for (const auto& e : inst.edges) {
    if (!std::isfinite(e.weight) || e.weight < 0.0)
      throw std::invalid_argument("bipartite instance: weights must be finite and >= 0");
    auto li = left_pos.find(e.left);
    auto ri = right_pos.find(e.right);
    if (li == left_pos.end() || ri == right_pos.end())
      throw std::invalid_argument("bipartite instance: edge endpoint not in instance");
    std::size_t r = transpose ? ri->second : li->second;
    std::size_t c = transpose ? li->second : ri->second;
    if (present[r * cols + c]) throw std::invalid_argument("bipartite instance: duplicate edge");
    present[r * cols + c] = 1;
    weight[r * cols + c] = e.weight;
  }

  Matching out;
  if (rows == 0 || inst.edges.empty()) return out;
  std::vector<double> cost(rows * cols);
  for (std::size_t i = 0; i < cost.size(); ++i) cost[i] = -weight[i];
  auto assigned = detail::min_cost_assignment(cost, rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t c = assigned[r];
    if (!present[r * cols + c]) continue;
    std::size_t li = transpose ? c : r, ri = transpose ? r : c;
    out.pairs.emplace_back(inst.left[li], inst.right[ri]);
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  for (auto [l, r] : out.pairs) {
    std::size_t li = left_pos[l], ri = right_pos[r];
    out.weight += transpose ? weight[ri * cols + li] : weight[li * cols + ri];
  }
  return out;
}

}  // namespace gsim
