#include "meshfree/geometry/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>

#include "meshfree/core/errors.hpp"

namespace meshfree {

namespace {

using Candidate = std::pair<double, int>;  // (squared distance, index)

struct Heap {
  std::priority_queue<Candidate> queue;
  int capacity = 0;

  [[nodiscard]] bool full() const { return static_cast<int>(queue.size()) >= capacity; }
  [[nodiscard]] double worst() const {
    return full() ? queue.top().first : std::numeric_limits<double>::infinity();
  }
  void offer(double d2, int idx) {
    if (!full()) {
      queue.emplace(d2, idx);
    } else if (Candidate(d2, idx) < queue.top()) {
      queue.pop();
      queue.emplace(d2, idx);
    }
  }
};

}  // namespace

template <int Dim>
KDTree<Dim>::KDTree(std::vector<vec_t> points, int leaf_size)
    : points_(std::move(points)), order_(points_.size()), leaf_size_(std::max(1, leaf_size)) {
  std::iota(order_.begin(), order_.end(), 0);
  if (!points_.empty()) {
    nodes_.reserve(2 * points_.size() / leaf_size_ + 2);
    build(0, size());
  }
}

template <int Dim>
int KDTree<Dim>::build(int begin, int end) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{begin, end});
  if (end - begin <= leaf_size_) return id;

  vec_t lo = points_[order_[begin]], hi = lo;
  for (int i = begin + 1; i < end; ++i) {
    lo = lo.cwiseMin(points_[order_[i]]);
    hi = hi.cwiseMax(points_[order_[i]]);
  }
  int dim = 0;
  (hi - lo).maxCoeff(&dim);
  if (hi[dim] == lo[dim]) return id;  // all points coincide

  const int mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](int a, int b) { return points_[a][dim] < points_[b][dim]; });
  const double split = points_[order_[mid]][dim];

  nodes_[id].split_dim = dim;
  nodes_[id].split = split;
  const int left = build(begin, mid);
  const int right = build(mid, end);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

template <int Dim>
void KDTree<Dim>::knn(const vec_t& query, int k, std::vector<int>& indices, std::vector<double>& dist2) const {
  indices.clear();
  dist2.clear();
  k = std::min(k, size());
  if (k <= 0) return;

  Heap heap;
  heap.capacity = k;
  // Explicit stack of (node, squared distance to its half-space).
  std::vector<std::pair<int, double>> stack;
  stack.reserve(64);
  stack.emplace_back(0, 0.0);
  while (!stack.empty()) {
    const auto [id, bound] = stack.back();
    stack.pop_back();
    // Ties at the bound may still displace a larger index, hence '>'.
    if (bound > heap.worst()) continue;
    const Node& node = nodes_[id];
    if (node.split_dim < 0) {
      for (int i = node.begin; i < node.end; ++i) {
        const int idx = order_[i];
        heap.offer((points_[idx] - query).squaredNorm(), idx);
      }
      continue;
    }
    const double diff = query[node.split_dim] - node.split;
    const double plane = diff * diff;
    const int near = diff < 0 ? node.left : node.right;
    const int far = diff < 0 ? node.right : node.left;
    stack.emplace_back(far, std::max(bound, plane));
    stack.emplace_back(near, bound);
  }

  std::vector<Candidate> result;
  result.reserve(k);
  while (!heap.queue.empty()) {
    result.push_back(heap.queue.top());
    heap.queue.pop();
  }
  std::sort(result.begin(), result.end());
  for (const auto& [d2, idx] : result) {
    indices.push_back(idx);
    dist2.push_back(d2);
  }
}

template <int Dim>
std::vector<int> KDTree<Dim>::knn(const vec_t& query, int k) const {
  std::vector<int> idx;
  std::vector<double> d2;
  knn(query, k, idx, d2);
  return idx;
}

template <int Dim>
std::pair<int, double> KDTree<Dim>::nearest(const vec_t& query) const {
  if (points_.empty()) throw GeometryError("nearest-neighbour query on an empty tree");
  std::vector<int> idx;
  std::vector<double> d2;
  knn(query, 1, idx, d2);
  return {idx.front(), d2.front()};
}

template <int Dim>
bool KDTree<Dim>::any_within(const vec_t& query, double radius) const {
  if (points_.empty()) return false;
  return nearest(query).second < radius * radius;
}

template class KDTree<1>;
template class KDTree<2>;
template class KDTree<3>;

}  // namespace meshfree
