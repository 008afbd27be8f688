#pragma once

#include <vector>

#include "meshfree/core/types.hpp"
#include "meshfree/operators/family.hpp"

namespace meshfree {

/// sum_a c_a(p) L_a with stored families L_a and coefficients evaluated at
/// the node position.
template <int Dim>
class Combination {
 public:
  struct Term {
    ScalarField<Dim> coefficient;  // empty means the constant `constant`
    double constant = 1.0;
    Family<Dim> family;

    [[nodiscard]] double at(const Vec<Dim>& p) const { return coefficient ? coefficient(p) : constant; }
  };

  Combination() = default;
  Combination(const Family<Dim>& f) { add(1.0, f); }  // NOLINT(google-explicit-constructor)

  Combination& add(double c, const Family<Dim>& f);
  Combination& add(ScalarField<Dim> c, const Family<Dim>& f);

  /// sum_k v_k d/dx_k, zero components skipped.
  static Combination directional(const Vec<Dim>& v);

  [[nodiscard]] const std::vector<Term>& terms() const { return terms_; }
  [[nodiscard]] bool empty() const { return terms_.empty(); }

  Combination& operator+=(const Combination& other);
  Combination& operator*=(double c);

 private:
  std::vector<Term> terms_;
};

template <int Dim>
Combination<Dim> operator+(Combination<Dim> a, const Combination<Dim>& b) {
  return a += b;
}

template <int Dim>
Combination<Dim> operator*(double c, Combination<Dim> a) {
  return a *= c;
}

}  // namespace meshfree
