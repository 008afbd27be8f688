#pragma once

#include "meshfree/operators/combination.hpp"
#include "meshfree/operators/shape_storage.hpp"
#include "meshfree/operators/sparse_system.hpp"

namespace meshfree {

/// Row i: sum_a c_a(p_i) w_a at the stencil columns, rhs `value`.
template <int Dim>
void assemble_interior_row(SparseSystem& system, const ShapeStorage<Dim>& storage, int i,
                           const Combination<Dim>& op, double value, int row = -1);

template <int Dim>
void assemble_interior_row(SparseSystem& system, const ShapeStorage<Dim>& storage, int i, const Family<Dim>& op,
                           double value, int row = -1) {
  assemble_interior_row(system, storage, i, Combination<Dim>(op), value, row);
}

/// Row i: u_i = value.
void assemble_dirichlet_row(SparseSystem& system, int i, double value, int row = -1);

/// Row i: discrete normal derivative n . grad u = value.
template <int Dim>
void assemble_neumann_row(SparseSystem& system, const ShapeStorage<Dim>& storage, int i, const Vec<Dim>& normal,
                          double value, int row = -1);

/// Binds a storage and a system so that equations can be written per node.
/// A negative `row` means the node's own row.
template <int Dim>
class ImplicitOperators {
 public:
  ImplicitOperators(const ShapeStorage<Dim>& storage, SparseSystem& system) : storage_(&storage), system_(&system) {}

  void equation(int i, const Combination<Dim>& op, double value, int row = -1) const {
    assemble_interior_row(*system_, *storage_, i, op, value, row);
  }
  void dirichlet(int i, double value, int row = -1) const { assemble_dirichlet_row(*system_, i, value, row); }
  void neumann(int i, const Vec<Dim>& normal, double value, int row = -1) const {
    assemble_neumann_row(*system_, *storage_, i, normal, value, row);
  }

  [[nodiscard]] SparseSystem& system() const { return *system_; }

 private:
  const ShapeStorage<Dim>* storage_;
  SparseSystem* system_;
};

}  // namespace meshfree
