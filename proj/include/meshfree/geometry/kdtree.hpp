#pragma once

#include <vector>

#include "meshfree/core/types.hpp"

namespace meshfree {

/// Static kd-tree over a fixed point set for exact k-nearest-neighbour
/// queries. Results are ordered by (distance, index) so equidistant points
/// come back in ascending index order.
template <int Dim>
class KDTree {
 public:
  using vec_t = Vec<Dim>;

  KDTree() = default;
  explicit KDTree(std::vector<vec_t> points, int leaf_size = 12);

  [[nodiscard]] int size() const { return static_cast<int>(points_.size()); }

  /// Indices of the `k` nearest points (k is clamped to size()).
  [[nodiscard]] std::vector<int> knn(const vec_t& query, int k) const;
  /// Same as knn but also returns squared distances.
  void knn(const vec_t& query, int k, std::vector<int>& indices, std::vector<double>& dist2) const;

  /// Index and squared distance of the closest point; size() must be > 0.
  [[nodiscard]] std::pair<int, double> nearest(const vec_t& query) const;

  /// True when some point lies strictly closer than `radius`.
  [[nodiscard]] bool any_within(const vec_t& query, double radius) const;

 private:
  struct Node {
    int begin = 0;
    int end = 0;
    int split_dim = -1;  // -1 marks a leaf
    double split = 0.0;
    int left = -1;
    int right = -1;
  };

  int build(int begin, int end);

  std::vector<vec_t> points_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
  int leaf_size_ = 12;
};

}  // namespace meshfree
