#pragma once

#include <span>
#include <vector>

#include "meshfree/core/types.hpp"

namespace meshfree {

/// A cloud of nodes with type tags, boundary normals and stencils.
///
/// Interior nodes carry a positive type, boundary nodes a negative one and
/// every boundary node stores an outward unit normal. Type 0 is reserved.
/// Stencils are ordered index lists with the node itself in the first slot.
template <int Dim>
class DomainDiscretization {
 public:
  using vec_t = Vec<Dim>;
  static constexpr int dim = Dim;

  DomainDiscretization() = default;

  int add_internal_node(const vec_t& p, int type = 1);
  int add_boundary_node(const vec_t& p, int type, const vec_t& normal);
  /// Dispatches on the sign of `type`; `normal` is ignored for interior nodes.
  int add_node(const vec_t& p, int type, const vec_t& normal = vec_t::Zero());

  /// Appends all nodes of `other` (stencils are not carried over).
  void append(const DomainDiscretization& other);

  [[nodiscard]] int size() const { return static_cast<int>(positions_.size()); }
  [[nodiscard]] bool empty() const { return positions_.empty(); }

  [[nodiscard]] const vec_t& pos(int i) const { return positions_[i]; }
  [[nodiscard]] const std::vector<vec_t>& positions() const { return positions_; }
  [[nodiscard]] int type(int i) const { return types_[i]; }
  [[nodiscard]] const std::vector<int>& types() const { return types_; }

  [[nodiscard]] bool is_boundary(int i) const { return types_[i] < 0; }
  [[nodiscard]] bool has_normal(int i) const { return normal_slot_[i] >= 0; }
  /// Throws GeometryError for nodes without a normal.
  [[nodiscard]] const vec_t& normal(int i) const;

  [[nodiscard]] std::vector<int> interior() const;
  [[nodiscard]] std::vector<int> boundary() const;
  [[nodiscard]] std::vector<int> all() const;
  [[nodiscard]] std::vector<int> with_type(int type) const;

  [[nodiscard]] bool has_stencil(int i) const { return !stencils_[i].empty(); }
  [[nodiscard]] std::span<const int> stencil(int i) const { return stencils_[i]; }
  [[nodiscard]] int stencil_size(int i) const { return static_cast<int>(stencils_[i].size()); }
  [[nodiscard]] const std::vector<std::vector<int>>& stencils() const { return stencils_; }
  /// Requires `indices[0] == i` and all indices in range.
  void set_stencil(int i, std::vector<int> indices);
  void clear_stencils();

  /// Replaces the position and normal of a boundary node (used by relaxation).
  void move_boundary_node(int i, const vec_t& p, const vec_t& normal);

  /// Throws GeometryError on the first violated structural invariant.
  void validate() const;

 private:
  std::vector<vec_t> positions_;
  std::vector<int> types_;
  std::vector<int> normal_slot_;
  std::vector<vec_t> normals_;
  std::vector<std::vector<int>> stencils_;
};

}  // namespace meshfree
