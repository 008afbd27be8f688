#pragma once

#include <array>
#include <vector>

#include "meshfree/core/types.hpp"

namespace meshfree {

template <int Dim>
using MultiIndex = std::array<int, Dim>;

/// A set of monomials x^e, listed in graded lexicographic order:
/// by total degree, then by decreasing exponent of the first coordinate
/// (x^2, xy, y^2 in 2D).
template <int Dim>
class Monomials {
 public:
  Monomials() = default;
  /// All monomials of total degree <= `degree`; `degree` = -1 gives the empty set.
  explicit Monomials(int degree);

  /// Pure powers only: 1, x, y, x^2, y^2, ... up to `degree`.
  static Monomials without_mixed(int degree);
  static Monomials from_exponents(std::vector<MultiIndex<Dim>> exponents);

  [[nodiscard]] int size() const { return static_cast<int>(exponents_.size()); }
  [[nodiscard]] const MultiIndex<Dim>& exponents(int j) const { return exponents_[j]; }
  [[nodiscard]] const std::vector<MultiIndex<Dim>>& all_exponents() const { return exponents_; }
  [[nodiscard]] int max_degree() const;

  [[nodiscard]] double eval(int j, const Vec<Dim>& x) const { return partial(exponents_[j], {}, x); }

  /// Value of d^|orders| x^e / dx^orders at x.
  static double partial(const MultiIndex<Dim>& e, const MultiIndex<Dim>& orders, const Vec<Dim>& x);

 private:
  std::vector<MultiIndex<Dim>> exponents_;
};

/// Number of monomials of total degree <= degree in Dim variables.
int monomial_count(int degree, int dim);

}  // namespace meshfree
