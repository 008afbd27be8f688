#pragma once

#include <cstdint>
#include <memory>

#include "meshfree/core/types.hpp"
#include "meshfree/geometry/domain.hpp"

namespace meshfree {

template <int Dim>
struct BoundingBox {
  Vec<Dim> lo;
  Vec<Dim> hi;
};

/// Closed point set built by constructive solid geometry from balls and
/// boxes. Shapes are immutable values; copies share their expression tree.
///
/// Every primitive carries a negative boundary tag which its boundary nodes
/// inherit, so that subsets of the boundary can be selected after combining
/// primitives.
template <int Dim>
class Shape {
 public:
  using vec_t = Vec<Dim>;

  static Shape ball(const vec_t& center, double radius, int boundary_type = -1);
  static Shape box(const vec_t& lo, const vec_t& hi, int boundary_type = -1);

  /// Union (`a + b`) and difference (`a - b`).
  static Shape unite(const Shape& a, const Shape& b);
  static Shape subtract(const Shape& a, const Shape& b);

  [[nodiscard]] Shape translated(const vec_t& offset) const;
  /// `rotation` must be orthogonal (|RᵀR - I| <= 1e-10).
  [[nodiscard]] Shape rotated(const Mat<Dim>& rotation) const;

  /// Membership in the closed set. For a difference A \ B only the open
  /// interior of B is removed.
  [[nodiscard]] bool contains(const vec_t& p) const;
  /// Membership in the open interior.
  [[nodiscard]] bool contains_open(const vec_t& p) const;

  [[nodiscard]] BoundingBox<Dim> bbox() const;

  /// Boundary nodes with outward unit normals and the primitives' tags.
  [[nodiscard]] DomainDiscretization<Dim> discretize_boundary(const SpacingFunction<Dim>& h,
                                                              std::uint64_t seed = 0) const;

  /// Boundary followed by a Poisson-disk interior fill.
  [[nodiscard]] DomainDiscretization<Dim> discretize(const SpacingFunction<Dim>& h, std::uint64_t seed = 0,
                                                     int interior_type = 1) const;

  struct Node;

 private:
  explicit Shape(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

template <int Dim>
Shape<Dim> operator+(const Shape<Dim>& a, const Shape<Dim>& b) {
  return Shape<Dim>::unite(a, b);
}

template <int Dim>
Shape<Dim> operator-(const Shape<Dim>& a, const Shape<Dim>& b) {
  return Shape<Dim>::subtract(a, b);
}

}  // namespace meshfree
