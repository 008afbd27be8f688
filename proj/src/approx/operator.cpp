#include "meshfree/approx/operator.hpp"

#include <cmath>
#include <string>

#include "meshfree/core/errors.hpp"

namespace meshfree {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

template <int Dim>
void check_axis(int axis) {
  if (axis < 0 || axis >= Dim) {
    throw ConfigError("derivative axis " + std::to_string(axis) + " out of range for dimension " +
                      std::to_string(Dim));
  }
}

template <int Dim>
double apply_atomic(const op::Atomic<Dim>& kind, const MultiIndex<Dim>& e, const Vec<Dim>& x) {
  using M = Monomials<Dim>;
  return std::visit(overloaded{[&](const op::Identity&) { return M::partial(e, {}, x); },
                               [&](const op::Derivative1& d) {
                                 MultiIndex<Dim> o{};
                                 o[d.axis] = 1;
                                 return M::partial(e, o, x);
                               },
                               [&](const op::Derivative2& d) {
                                 MultiIndex<Dim> o{};
                                 ++o[d.axis1];
                                 ++o[d.axis2];
                                 return M::partial(e, o, x);
                               },
                               [&](const op::Laplacian&) {
                                 double sum = 0.0;
                                 for (int a = 0; a < Dim; ++a) {
                                   MultiIndex<Dim> o{};
                                   o[a] = 2;
                                   sum += M::partial(e, o, x);
                                 }
                                 return sum;
                               },
                               [&](const op::Custom<Dim>& c) { return c.impl->apply_monomial(e, x); }},
                    kind);
}

template <int Dim>
double apply_atomic(const op::Atomic<Dim>& kind, const Rbf& rbf, const Vec<Dim>& y) {
  const double r = y.norm();
  return std::visit(overloaded{[&](const op::Identity&) { return rbf_value(rbf, r); },
                               [&](const op::Derivative1& d) {
                                 if (r == 0.0) {
                                   check_gradient_at_zero(rbf);
                                   return 0.0;
                                 }
                                 return radial_terms(rbf, r).first_over_r * y[d.axis];
                               },
                               [&](const op::Derivative2& d) {
                                 const double delta = d.axis1 == d.axis2 ? 1.0 : 0.0;
                                 if (r == 0.0) return delta * rbf_curvature_at_zero(rbf);
                                 const RadialTerms t = radial_terms(rbf, r);
                                 return y[d.axis1] * y[d.axis2] * t.mixed + delta * t.first_over_r;
                               },
                               [&](const op::Laplacian&) {
                                 if (r == 0.0) return Dim * rbf_curvature_at_zero(rbf);
                                 const RadialTerms t = radial_terms(rbf, r);
                                 return t.second + (Dim - 1) * t.first_over_r;
                               },
                               [&](const op::Custom<Dim>& c) { return c.impl->apply_rbf(rbf, y); }},
                    kind);
}

template <int Dim, class Basis>
double apply_terms(const Operator<Dim>& op, const Basis& basis, const Vec<Dim>& x, double scale) {
  double sum = 0.0;
  for (const auto& term : op.terms()) {
    const double v = apply_atomic<Dim>(term.kind, basis, x);
    sum += term.coefficient * v / std::pow(scale, op::order<Dim>(term.kind));
  }
  return sum;
}

}  // namespace

template <int Dim>
int op::order(const Atomic<Dim>& a) {
  return std::visit(overloaded{[](const Identity&) { return 0; }, [](const Derivative1&) { return 1; },
                               [](const Derivative2&) { return 2; }, [](const Laplacian&) { return 2; },
                               [](const Custom<Dim>& c) { return c.impl->order(); }},
                    a);
}

template <int Dim>
Operator<Dim> Operator<Dim>::derivative(int axis) {
  check_axis<Dim>(axis);
  return Operator(op::Derivative1{axis});
}

template <int Dim>
Operator<Dim> Operator<Dim>::derivative(int axis1, int axis2) {
  check_axis<Dim>(axis1);
  check_axis<Dim>(axis2);
  return Operator(op::Derivative2{std::min(axis1, axis2), std::max(axis1, axis2)});
}

template <int Dim>
Operator<Dim> Operator<Dim>::directional(const Vec<Dim>& v) {
  if (!(v.squaredNorm() > 0.0) || !v.allFinite()) throw ConfigError("directional derivative needs a nonzero vector");
  Operator out;
  for (int a = 0; a < Dim; ++a) {
    if (v[a] != 0.0) out.terms_.push_back(Term{v[a], op::Derivative1{a}});
  }
  return out;
}

template <int Dim>
Operator<Dim> Operator<Dim>::custom(std::shared_ptr<const CustomOperator<Dim>> impl) {
  if (!impl) throw ConfigError("custom operator is null");
  return Operator(op::Custom<Dim>{std::move(impl)});
}

template <int Dim>
int Operator<Dim>::order() const {
  int o = 0;
  for (const auto& t : terms_) o = std::max(o, op::order<Dim>(t.kind));
  return o;
}

template <int Dim>
Operator<Dim>& Operator<Dim>::operator+=(const Operator& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

template <int Dim>
Operator<Dim>& Operator<Dim>::operator*=(double c) {
  for (auto& t : terms_) t.coefficient *= c;
  return *this;
}

template <int Dim>
double apply_operator_to_basis(const Operator<Dim>& op, const MultiIndex<Dim>& e, const Vec<Dim>& x, double scale) {
  return apply_terms<Dim>(op, e, x, scale);
}

template <int Dim>
double apply_operator_to_basis(const Operator<Dim>& op, const Rbf& rbf, const Vec<Dim>& y, double scale) {
  return apply_terms<Dim>(op, rbf, y, scale);
}

#define MESHFREE_INSTANTIATE(D)                                                                          \
  template int op::order<D>(const op::Atomic<D>&);                                                       \
  template class Operator<D>;                                                                            \
  template double apply_operator_to_basis<D>(const Operator<D>&, const MultiIndex<D>&, const Vec<D>&,    \
                                             double);                                                    \
  template double apply_operator_to_basis<D>(const Operator<D>&, const Rbf&, const Vec<D>&, double);
MESHFREE_INSTANTIATE(1)
MESHFREE_INSTANTIATE(2)
MESHFREE_INSTANTIATE(3)
#undef MESHFREE_INSTANTIATE

}  // namespace meshfree
