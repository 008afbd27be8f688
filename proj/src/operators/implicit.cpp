#include "meshfree/operators/implicit.hpp"

#include <string>

#include "meshfree/core/errors.hpp"

namespace meshfree {

template <int Dim>
void assemble_interior_row(SparseSystem& system, const ShapeStorage<Dim>& storage, int i,
                           const Combination<Dim>& op, double value, int row) {
  if (row < 0) row = i;
  system.begin_row(row, i, RowKind::interior);
  const auto st = storage.stencil(i);
  for (const auto& t : op.terms()) {
    const double c = t.at(storage.pos(i));
    const auto w = storage.weights(t.family, i);
    for (std::size_t j = 0; j < w.size(); ++j) system.add(row, st[j], c * w[j]);
  }
  system.set_rhs(row, value);
}

void assemble_dirichlet_row(SparseSystem& system, int i, double value, int row) {
  if (row < 0) row = i;
  system.begin_row(row, i, RowKind::dirichlet);
  system.add(row, i, 1.0);
  system.set_rhs(row, value);
}

template <int Dim>
void assemble_neumann_row(SparseSystem& system, const ShapeStorage<Dim>& storage, int i, const Vec<Dim>& normal,
                          double value, int row) {
  if (row < 0) row = i;
  system.begin_row(row, i, RowKind::neumann);
  const auto st = storage.stencil(i);
  for (int j = 0; j < storage.stencil_size(i); ++j) {
    double c = 0.0;
    for (int a = 0; a < Dim; ++a) c += normal[a] * storage.weights(Family<Dim>::derivative(a), i)[j];
    system.add(row, st[j], c);
  }
  system.set_rhs(row, value);
}

#define MESHFREE_INSTANTIATE(D)                                                                              \
  template void assemble_interior_row<D>(SparseSystem&, const ShapeStorage<D>&, int, const Combination<D>&,  \
                                         double, int);                                                       \
  template void assemble_neumann_row<D>(SparseSystem&, const ShapeStorage<D>&, int, const Vec<D>&, double,   \
                                        int);                                                                \
  template class ImplicitOperators<D>;
MESHFREE_INSTANTIATE(1)
MESHFREE_INSTANTIATE(2)
MESHFREE_INSTANTIATE(3)
#undef MESHFREE_INSTANTIATE

}  // namespace meshfree
