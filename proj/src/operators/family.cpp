#include "meshfree/operators/family.hpp"

#include <string>

#include "meshfree/core/errors.hpp"
#include "meshfree/operators/combination.hpp"

namespace meshfree {

template <int Dim>
Family<Dim> Family<Dim>::derivative(int axis) {
  if (axis < 0 || axis >= Dim) throw ConfigError("derivative axis " + std::to_string(axis) + " out of range");
  Family f(Kind::derivative1);
  f.axis1_ = axis;
  return f;
}

template <int Dim>
Family<Dim> Family<Dim>::derivative(int axis1, int axis2) {
  if (axis1 < 0 || axis1 >= Dim || axis2 < 0 || axis2 >= Dim) {
    throw ConfigError("second derivative axes out of range");
  }
  Family f(Kind::derivative2);
  f.axis1_ = std::min(axis1, axis2);
  f.axis2_ = std::max(axis1, axis2);
  return f;
}

template <int Dim>
Family<Dim> Family<Dim>::custom(std::shared_ptr<const CustomOperator<Dim>> impl) {
  if (!impl) throw ConfigError("custom operator is null");
  Family f(Kind::custom);
  f.custom_ = std::move(impl);
  return f;
}

template <int Dim>
std::string Family<Dim>::label() const {
  switch (kind_) {
    case Kind::identity:
      return "identity";
    case Kind::derivative1:
      return "d_" + std::to_string(axis1_);
    case Kind::derivative2:
      return "d_" + std::to_string(axis1_) + "_" + std::to_string(axis2_);
    case Kind::laplacian:
      return "lap";
    case Kind::custom:
      return "custom:" + custom_->name();
  }
  return {};
}

template <int Dim>
Operator<Dim> Family<Dim>::to_operator() const {
  switch (kind_) {
    case Kind::identity:
      return Operator<Dim>::identity();
    case Kind::derivative1:
      return Operator<Dim>::derivative(axis1_);
    case Kind::derivative2:
      return Operator<Dim>::derivative(axis1_, axis2_);
    case Kind::laplacian:
      return Operator<Dim>::laplacian();
    case Kind::custom:
      return Operator<Dim>::custom(custom_);
  }
  throw Error("unknown operator family");
}

template <int Dim>
std::vector<Family<Dim>> all_standard_families() {
  std::vector<Family<Dim>> out{Family<Dim>::identity()};
  for (int a = 0; a < Dim; ++a) out.push_back(Family<Dim>::derivative(a));
  for (int a = 0; a < Dim; ++a)
    for (int b = a; b < Dim; ++b) out.push_back(Family<Dim>::derivative(a, b));
  out.push_back(Family<Dim>::laplacian());
  return out;
}

template <int Dim>
std::vector<Family<Dim>> laplacian_and_gradient() {
  std::vector<Family<Dim>> out{Family<Dim>::laplacian()};
  for (int a = 0; a < Dim; ++a) out.push_back(Family<Dim>::derivative(a));
  return out;
}

template <int Dim>
Combination<Dim>& Combination<Dim>::add(double c, const Family<Dim>& f) {
  terms_.push_back(Term{{}, c, f});
  return *this;
}

template <int Dim>
Combination<Dim>& Combination<Dim>::add(ScalarField<Dim> c, const Family<Dim>& f) {
  terms_.push_back(Term{std::move(c), 1.0, f});
  return *this;
}

template <int Dim>
Combination<Dim> Combination<Dim>::directional(const Vec<Dim>& v) {
  if (!(v.squaredNorm() > 0.0) || !v.allFinite()) throw ConfigError("directional derivative needs a nonzero vector");
  Combination out;
  for (int a = 0; a < Dim; ++a) {
    if (v[a] != 0.0) out.add(v[a], Family<Dim>::derivative(a));
  }
  return out;
}

template <int Dim>
Combination<Dim>& Combination<Dim>::operator+=(const Combination& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

template <int Dim>
Combination<Dim>& Combination<Dim>::operator*=(double c) {
  for (auto& t : terms_) {
    if (t.coefficient) {
      t.coefficient = [f = std::move(t.coefficient), c](const Vec<Dim>& p) { return c * f(p); };
    } else {
      t.constant *= c;
    }
  }
  return *this;
}

#define MESHFREE_INSTANTIATE(D)                                  \
  template class Family<D>;                                      \
  template class Combination<D>;                                 \
  template std::vector<Family<D>> all_standard_families<D>();    \
  template std::vector<Family<D>> laplacian_and_gradient<D>();
MESHFREE_INSTANTIATE(1)
MESHFREE_INSTANTIATE(2)
MESHFREE_INSTANTIATE(3)
#undef MESHFREE_INSTANTIATE

}  // namespace meshfree
