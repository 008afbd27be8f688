#include "meshfree/geometry/stencil.hpp"

#include <string>

#include "meshfree/core/errors.hpp"
#include "meshfree/geometry/kdtree.hpp"

namespace meshfree {

template <int Dim>
void find_closest_stencils(DomainDiscretization<Dim>& domain, int n, std::span<const int> for_which,
                           std::span<const int> search_among) {
  if (n < 1) throw GeometryError("stencil size must be positive");
  const int N = domain.size();
  std::vector<char> candidate(N, 0);
  for (int j : search_among) {
    if (j < 0 || j >= N) throw GeometryError("search node " + std::to_string(j) + " out of range");
    candidate[j] = 1;
  }
  // Tree-local indices must follow global order for the index tie-break.
  std::vector<Vec<Dim>> points;
  std::vector<int> ids;
  for (int j = 0; j < N; ++j) {
    if (!candidate[j]) continue;
    points.push_back(domain.pos(j));
    ids.push_back(j);
  }
  const KDTree<Dim> tree(std::move(points));

  std::vector<int> local;
  std::vector<double> d2;
  for (int i : for_which) {
    if (i < 0 || i >= N) throw GeometryError("stencil node " + std::to_string(i) + " out of range");
    if (!candidate[i]) {
      throw GeometryError("node " + std::to_string(i) + " is not among the searched nodes");
    }
    if (n > tree.size()) {
      throw GeometryError("node " + std::to_string(i) + ": stencil size " + std::to_string(n) + " exceeds the " +
                          std::to_string(tree.size()) + " candidate nodes");
    }
    // One extra in case a coincident node outranks self by index.
    tree.knn(domain.pos(i), std::min(n + 1, tree.size()), local, d2);
    std::vector<int> stencil;
    stencil.reserve(n);
    stencil.push_back(i);
    for (int k : local) {
      if (static_cast<int>(stencil.size()) == n) break;
      if (ids[k] != i) stencil.push_back(ids[k]);
    }
    domain.set_stencil(i, std::move(stencil));
  }
}

template <int Dim>
void find_closest_stencils(DomainDiscretization<Dim>& domain, int n) {
  const auto all = domain.all();
  find_closest_stencils<Dim>(domain, n, all, all);
}

#define MESHFREE_INSTANTIATE(D)                                                                                   \
  template void find_closest_stencils<D>(DomainDiscretization<D>&, int, std::span<const int>,                     \
                                         std::span<const int>);                                                  \
  template void find_closest_stencils<D>(DomainDiscretization<D>&, int);
MESHFREE_INSTANTIATE(1)
MESHFREE_INSTANTIATE(2)
MESHFREE_INSTANTIATE(3)
#undef MESHFREE_INSTANTIATE

}  // namespace meshfree
