#include "meshfree/operators/explicit.hpp"

#include <cmath>
#include <string>

#include "meshfree/core/errors.hpp"

namespace meshfree {

template <int Dim>
void ExplicitOperators<Dim>::check_field(Eigen::Index n) const {
  if (n != storage_->size()) {
    throw Error("field has " + std::to_string(n) + " values, the domain has " + std::to_string(storage_->size()) +
                " nodes");
  }
}

template <int Dim>
double ExplicitOperators<Dim>::apply(const Family<Dim>& f, const Eigen::VectorXd& u, int i) const {
  check_field(u.size());
  const auto w = storage_->weights(f, i);
  const auto st = storage_->stencil(i);
  double sum = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) sum += w[j] * u[st[j]];
  return sum;
}

template <int Dim>
double ExplicitOperators<Dim>::apply(const Combination<Dim>& op, const Eigen::VectorXd& u, int i) const {
  double sum = 0.0;
  for (const auto& t : op.terms()) sum += t.at(storage_->pos(i)) * apply(t.family, u, i);
  return sum;
}

template <int Dim>
Vec<Dim> ExplicitOperators<Dim>::grad(const Eigen::VectorXd& u, int i) const {
  Vec<Dim> g;
  for (int a = 0; a < Dim; ++a) g[a] = d1(u, a, i);
  return g;
}

template <int Dim>
double ExplicitOperators<Dim>::neumann(const Eigen::VectorXd& u, int i, const Vec<Dim>& normal, double g) const {
  check_field(u.size());
  const auto st = storage_->stencil(i);
  const int n = storage_->stencil_size(i);
  double denominator = 0.0;
  double weight_norm = 0.0;
  double rest = 0.0;
  for (int a = 0; a < Dim; ++a) denominator += normal[a] * storage_->weights(Family<Dim>::derivative(a), i)[0];
  for (int j = 1; j < n; ++j) {
    double c = 0.0;
    for (int a = 0; a < Dim; ++a) c += normal[a] * storage_->weights(Family<Dim>::derivative(a), i)[j];
    rest += c * u[st[j]];
    weight_norm += c * c;
  }
  weight_norm = std::sqrt(weight_norm + denominator * denominator);
  if (std::abs(denominator) < 1e-12 * weight_norm || denominator == 0.0) {
    throw NumericalError("Neumann condition at node " + std::to_string(i) +
                         " is ill-posed: the normal derivative does not depend on the node's own value");
  }
  return (g - rest) / denominator;
}

template <int Dim>
double ExplicitOperators<Dim>::component_apply(const Family<Dim>& f, const VectorField& u, int component,
                                               int i) const {
  check_field(static_cast<Eigen::Index>(u.size()));
  const auto w = storage_->weights(f, i);
  const auto st = storage_->stencil(i);
  double sum = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) sum += w[j] * u[st[j]][component];
  return sum;
}

template <int Dim>
Mat<Dim> ExplicitOperators<Dim>::grad(const VectorField& u, int i) const {
  Mat<Dim> j;
  for (int k = 0; k < Dim; ++k)
    for (int l = 0; l < Dim; ++l) j(k, l) = component_apply(Family<Dim>::derivative(l), u, k, i);
  return j;
}

template <int Dim>
double ExplicitOperators<Dim>::div(const VectorField& u, int i) const {
  double sum = 0.0;
  for (int k = 0; k < Dim; ++k) sum += component_apply(Family<Dim>::derivative(k), u, k, i);
  return sum;
}

template <int Dim>
Vec<Dim> ExplicitOperators<Dim>::lap(const VectorField& u, int i) const {
  Vec<Dim> out;
  for (int k = 0; k < Dim; ++k) out[k] = component_apply(Family<Dim>::laplacian(), u, k, i);
  return out;
}

template <int Dim>
Vec<Dim> ExplicitOperators<Dim>::graddiv(const VectorField& u, int i) const {
  Vec<Dim> out;
  for (int k = 0; k < Dim; ++k) {
    double sum = 0.0;
    for (int l = 0; l < Dim; ++l) sum += component_apply(Family<Dim>::derivative(k, l), u, l, i);
    out[k] = sum;
  }
  return out;
}

template class ExplicitOperators<1>;
template class ExplicitOperators<2>;
template class ExplicitOperators<3>;

}  // namespace meshfree
