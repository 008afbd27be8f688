#pragma once

#include <ostream>
#include <span>
#include <vector>

#include "meshfree/approx/engine.hpp"
#include "meshfree/geometry/domain.hpp"
#include "meshfree/operators/family.hpp"

namespace meshfree {

/// Stencil weights for a set of operator families, stored per node and
/// aligned index for index with the node's stencil.
template <int Dim>
class ShapeStorage {
 public:
  ShapeStorage() = default;

  [[nodiscard]] int size() const { return static_cast<int>(positions_.size()); }
  [[nodiscard]] const Vec<Dim>& pos(int i) const { return positions_[i]; }
  [[nodiscard]] std::span<const int> stencil(int i) const;
  [[nodiscard]] int stencil_size(int i) const { return offsets_[i + 1] - offsets_[i]; }

  [[nodiscard]] const std::vector<Family<Dim>>& families() const { return families_; }
  [[nodiscard]] bool stores(const Family<Dim>& f) const { return family_index(f) >= 0; }
  [[nodiscard]] bool computed(int i) const { return computed_[i] != 0; }

  /// Weights of family `f` at node `i`. Throws Error when the family is not
  /// stored or the node was not computed.
  [[nodiscard]] std::span<const double> weights(const Family<Dim>& f, int i) const;

  /// Debug dump, one `node,family,offset,weight` line per stored weight.
  void write_csv(std::ostream& out) const;

 private:
  template <int D>
  friend ShapeStorage<D> compute_shapes(const DomainDiscretization<D>&, const ApproxEngine<D>&,
                                        const std::vector<Family<D>>&, std::span<const int>, int);

  [[nodiscard]] int family_index(const Family<Dim>& f) const;
  [[nodiscard]] int checked_family(const Family<Dim>& f, int i) const;

  std::vector<Vec<Dim>> positions_;
  std::vector<int> offsets_;
  std::vector<int> indices_;
  std::vector<Family<Dim>> families_;
  std::vector<std::vector<double>> weights_;
  std::vector<char> computed_;
};

/// Worker count for weight computation: `requested` when positive, else the
/// MESHFREE_THREADS environment variable, else (or when that is 0) the
/// hardware concurrency.
int resolve_thread_count(int requested = 0);

/// Computes weights of every family at every node of `for_which`, in
/// parallel. The result does not depend on the number of threads. A failing
/// node raises NumericalError naming the lowest failing node index.
template <int Dim>
ShapeStorage<Dim> compute_shapes(const DomainDiscretization<Dim>& domain, const ApproxEngine<Dim>& engine,
                                 const std::vector<Family<Dim>>& families, std::span<const int> for_which,
                                 int threads = 0);

/// All nodes.
template <int Dim>
ShapeStorage<Dim> compute_shapes(const DomainDiscretization<Dim>& domain, const ApproxEngine<Dim>& engine,
                                 const std::vector<Family<Dim>>& families, int threads = 0);

}  // namespace meshfree
