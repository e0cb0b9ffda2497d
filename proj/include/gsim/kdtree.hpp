#pragma once

// Exact Euclidean k-nearest-neighbor search over vertex labels.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <queue>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gsim/graph.hpp"
#include "gsim/labeling.hpp"

namespace gsim {

struct Neighbor {
  VertexId id;
  double distance;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// k-d tree splitting on the dimension of largest spread at the median.
/// Ties in distance are broken by smaller point id.
class KdIndex {
 public:
  static constexpr std::size_t kLeafSize = 16;

  KdIndex(std::size_t dimension, std::vector<double> coords)
      : dim_(dimension), coords_(std::move(coords)) {
    if (dim_ == 0) throw std::invalid_argument("KdIndex: dimension must be positive");
    if (coords_.size() % dim_ != 0) throw std::invalid_argument("KdIndex: ragged coordinates");
    order_.resize(coords_.size() / dim_);
    std::iota(order_.begin(), order_.end(), VertexId{0});
    if (!order_.empty()) build(0, order_.size());
  }

  explicit KdIndex(const LabelSet& labels) : KdIndex(labels.dimension(), flatten(labels)) {}

  std::size_t size() const noexcept { return order_.size(); }
  std::size_t dimension() const noexcept { return dim_; }
  std::span<const double> point(VertexId id) const {
    return {coords_.data() + static_cast<std::size_t>(id) * dim_, dim_};
  }

  /// The min(k, size()) nearest points, ascending by (distance, id).
  std::vector<Neighbor> knn(std::span<const double> query, std::size_t k) const {
    if (query.size() != dim_) throw std::invalid_argument("knn: query dimension mismatch");
    if (k == 0) throw std::invalid_argument("knn: k must be >= 1");
    Search s{query, std::min(k, size()), {}};
    if (!nodes_.empty()) search(0, s);
    std::vector<Neighbor> out(s.best.size());
    for (std::size_t i = out.size(); i-- > 0;) {
      auto [d2, id] = s.best.top();
      s.best.pop();
      out[i] = {id, std::sqrt(d2)};
    }
    return out;
  }

  std::vector<Neighbor> knn(const GraphletVector& query, std::size_t k) const {
    return knn(std::span<const double>(query.values), k);
  }

  double squared_distance(std::span<const double> q, VertexId id) const {
    auto p = point(id);
    double d2 = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      double diff = q[i] - p[i];
      d2 += diff * diff;
    }
    return d2;
  }

 private:
  struct Node {
    std::size_t begin, end;
    std::size_t axis = 0;
    double split = 0.0;
    std::int64_t left = -1, right = -1;
  };

  struct Search {
    std::span<const double> query;
    std::size_t k;
    std::priority_queue<std::pair<double, VertexId>> best;  // max-heap on (d2, id)
  };

  static std::vector<double> flatten(const LabelSet& labels) {
    std::vector<double> flat;
    flat.reserve(labels.size() * labels.dimension());
    for (const auto& f : labels.labels) {
      if (f.dimension() != labels.dimension())
        throw std::invalid_argument("KdIndex: label dimension mismatch");
      flat.insert(flat.end(), f.values.begin(), f.values.end());
    }
    return flat;
  }

  double coord(VertexId id, std::size_t axis) const {
    return coords_[static_cast<std::size_t>(id) * dim_ + axis];
  }

  std::int64_t build(std::size_t begin, std::size_t end) {
    auto idx = static_cast<std::int64_t>(nodes_.size());
    nodes_.push_back({begin, end});
    if (end - begin <= kLeafSize) return idx;

    std::size_t axis = 0;
    double widest = 0.0;
    for (std::size_t d = 0; d < dim_; ++d) {
      auto [lo, hi] = std::minmax_element(
          order_.begin() + static_cast<std::ptrdiff_t>(begin),
          order_.begin() + static_cast<std::ptrdiff_t>(end),
          [&](VertexId a, VertexId b) { return coord(a, d) < coord(b, d); });
      double spread = coord(*hi, d) - coord(*lo, d);
      if (spread > widest) {
        widest = spread;
        axis = d;
      }
    }
    if (widest == 0.0) return idx;  // all points coincide

    std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                     order_.begin() + static_cast<std::ptrdiff_t>(mid),
                     order_.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](VertexId a, VertexId b) { return coord(a, axis) < coord(b, axis); });
    double split = coord(order_[mid], axis);
    auto left = build(begin, mid);
    auto right = build(mid, end);
    auto& node = nodes_[static_cast<std::size_t>(idx)];
    node.axis = axis;
    node.split = split;
    node.left = left;
    node.right = right;
    return idx;
  }

  void offer(Search& s, VertexId id) const {
    std::pair<double, VertexId> cand{squared_distance(s.query, id), id};
    if (s.best.size() < s.k) {
      s.best.push(cand);
    } else if (cand < s.best.top()) {
      s.best.pop();
      s.best.push(cand);
    }
  }

  void search(std::int64_t idx, Search& s) const {
    const Node& node = nodes_[static_cast<std::size_t>(idx)];
    if (node.left < 0) {
      for (std::size_t i = node.begin; i < node.end; ++i) offer(s, order_[i]);
      return;
    }
    // left holds coords <= split, right holds coords >= split
    double diff = s.query[node.axis] - node.split;
    auto near = diff <= 0.0 ? node.left : node.right;
    auto far = diff <= 0.0 ? node.right : node.left;
    search(near, s);
    if (s.best.size() < s.k || diff * diff <= s.best.top().first) search(far, s);
  }

  std::size_t dim_;
  std::vector<double> coords_;
  std::vector<VertexId> order_;
  std::vector<Node> nodes_;
};

inline KdIndex build_index(const LabelSet& labels) { return KdIndex(labels); }

}  // namespace gsim
