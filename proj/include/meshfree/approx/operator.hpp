#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "meshfree/approx/monomials.hpp"
#include "meshfree/approx/rbf.hpp"
#include "meshfree/core/types.hpp"

namespace meshfree {

/// User-defined linear operator. Implementations supply its action on
/// monomials and on radial functions; everything else (weights, storage,
/// assembly) treats it like a built-in operator.
template <int Dim>
class CustomOperator {
 public:
  virtual ~CustomOperator() = default;
  [[nodiscard]] virtual std::string name() const = 0;
  /// Differential order, used to rescale weights computed in scaled coordinates.
  [[nodiscard]] virtual int order() const = 0;
  /// (L x^e)(x)
  [[nodiscard]] virtual double apply_monomial(const MultiIndex<Dim>& e, const Vec<Dim>& x) const = 0;
  /// (L phi(|.|))(y), the radial function centred at the origin.
  [[nodiscard]] virtual double apply_rbf(const Rbf& rbf, const Vec<Dim>& y) const = 0;
};

namespace op {

struct Identity {};
struct Derivative1 {
  int axis = 0;
};
/// Mixed or pure second derivative; stored with axis1 <= axis2.
struct Derivative2 {
  int axis1 = 0;
  int axis2 = 0;
};
struct Laplacian {};
template <int Dim>
struct Custom {
  std::shared_ptr<const CustomOperator<Dim>> impl;
};

template <int Dim>
using Atomic = std::variant<Identity, Derivative1, Derivative2, Laplacian, Custom<Dim>>;

template <int Dim>
int order(const Atomic<Dim>& a);

}  // namespace op

/// Linear differential operator of order <= 2 (or a custom one), kept as a
/// flat sum of coefficient * atomic operator.
template <int Dim>
class Operator {
 public:
  struct Term {
    double coefficient;
    op::Atomic<Dim> kind;
  };

  static Operator identity() { return Operator(op::Identity{}); }
  static Operator derivative(int axis);
  static Operator derivative(int axis1, int axis2);
  static Operator laplacian() { return Operator(op::Laplacian{}); }
  /// sum_k v_k d/dx_k; `v` must be nonzero.
  static Operator directional(const Vec<Dim>& v);
  static Operator custom(std::shared_ptr<const CustomOperator<Dim>> impl);

  [[nodiscard]] const std::vector<Term>& terms() const { return terms_; }
  [[nodiscard]] int order() const;

  Operator& operator+=(const Operator& other);
  Operator& operator*=(double c);

 private:
  Operator() = default;
  explicit Operator(op::Atomic<Dim> kind) : terms_{Term{1.0, std::move(kind)}} {}
  std::vector<Term> terms_;
};

template <int Dim>
Operator<Dim> operator+(Operator<Dim> a, const Operator<Dim>& b) {
  return a += b;
}

template <int Dim>
Operator<Dim> operator*(double c, Operator<Dim> a) {
  return a *= c;
}

/// (L x^e)(x) / s^order, applied term by term.
template <int Dim>
double apply_operator_to_basis(const Operator<Dim>& op, const MultiIndex<Dim>& e, const Vec<Dim>& x,
                               double scale = 1.0);

/// (L phi(|.|))(y) / s^order for the radial function centred at the origin.
/// Throws NumericalError when the derivative is singular at y = 0.
template <int Dim>
double apply_operator_to_basis(const Operator<Dim>& op, const Rbf& rbf, const Vec<Dim>& y, double scale = 1.0);

}  // namespace meshfree
