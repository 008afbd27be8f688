#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "meshfree/core/types.hpp"

namespace meshfree::detail {

/// Uniform bucket grid for incremental "is anything closer than r" queries.
/// Points outside the covered box are clamped into the border cells.
template <int Dim>
class SpatialGrid {
 public:
  using vec_t = Vec<Dim>;

  SpatialGrid(const vec_t& lo, const vec_t& hi, double cell) : origin_(lo), cell_(cell) {
    const vec_t extent = hi - lo;
    long long total = 1;
    for (int d = 0; d < Dim; ++d) {
      counts_[d] = std::max(1, static_cast<int>(std::ceil(extent[d] / cell_)) + 1);
      total *= counts_[d];
    }
    // Keep memory bounded for very fine spacing in large boxes.
    while (total > 20'000'000) {
      cell_ *= 1.5;
      total = 1;
      for (int d = 0; d < Dim; ++d) {
        counts_[d] = std::max(1, static_cast<int>(std::ceil(extent[d] / cell_)) + 1);
        total *= counts_[d];
      }
    }
    cells_.resize(static_cast<std::size_t>(total));
  }

  void insert(int index, const vec_t& p) {
    points_.resize(std::max<std::size_t>(points_.size(), index + 1));
    points_[index] = p;
    cells_[flat(coords(p))].push_back(index);
  }

  [[nodiscard]] bool any_within(const vec_t& p, double r) const {
    const double r2 = r * r;
    std::array<int, Dim> lo{}, hi{};
    for (int d = 0; d < Dim; ++d) {
      lo[d] = clamp_coord(d, std::floor((p[d] - r - origin_[d]) / cell_));
      hi[d] = clamp_coord(d, std::floor((p[d] + r - origin_[d]) / cell_));
    }
    std::array<int, Dim> c = lo;
    while (true) {
      for (int idx : cells_[flat(c)]) {
        if ((points_[idx] - p).squaredNorm() < r2) return true;
      }
      int d = 0;
      while (d < Dim) {
        if (++c[d] <= hi[d]) break;
        c[d] = lo[d];
        ++d;
      }
      if (d == Dim) return false;
    }
  }

 private:
  int clamp_coord(int d, double v) const {
    if (!(v > 0)) return 0;
    return static_cast<int>(std::min<double>(v, counts_[d] - 1));
  }
  std::array<int, Dim> coords(const vec_t& p) const {
    std::array<int, Dim> c{};
    for (int d = 0; d < Dim; ++d) c[d] = clamp_coord(d, std::floor((p[d] - origin_[d]) / cell_));
    return c;
  }
  std::size_t flat(const std::array<int, Dim>& c) const {
    std::size_t f = 0;
    for (int d = Dim - 1; d >= 0; --d) f = f * counts_[d] + c[d];
    return f;
  }

  vec_t origin_;
  double cell_;
  std::array<int, Dim> counts_{};
  std::vector<std::vector<int>> cells_;
  std::vector<vec_t> points_;
};

}  // namespace meshfree::detail
