#pragma once

#include <vector>

#include <Eigen/Core>

#include "meshfree/operators/combination.hpp"
#include "meshfree/operators/shape_storage.hpp"

namespace meshfree {

/// Evaluation of stored operators on nodal fields. Holds a reference to the
/// storage, which must outlive it.
template <int Dim>
class ExplicitOperators {
 public:
  using VectorField = std::vector<Vec<Dim>>;

  explicit ExplicitOperators(const ShapeStorage<Dim>& storage) : storage_(&storage) {}

  /// sum_j w_j u[I_j], summed in stencil order.
  [[nodiscard]] double apply(const Family<Dim>& f, const Eigen::VectorXd& u, int i) const;
  /// sum_a c_a(p_i) (w_a . u)
  [[nodiscard]] double apply(const Combination<Dim>& op, const Eigen::VectorXd& u, int i) const;

  [[nodiscard]] double value(const Eigen::VectorXd& u, int i) const { return apply(Family<Dim>::identity(), u, i); }
  [[nodiscard]] double lap(const Eigen::VectorXd& u, int i) const { return apply(Family<Dim>::laplacian(), u, i); }
  [[nodiscard]] double d1(const Eigen::VectorXd& u, int axis, int i) const {
    return apply(Family<Dim>::derivative(axis), u, i);
  }
  [[nodiscard]] double d2(const Eigen::VectorXd& u, int a, int b, int i) const {
    return apply(Family<Dim>::derivative(a, b), u, i);
  }
  [[nodiscard]] double directional(const Eigen::VectorXd& u, const Vec<Dim>& v, int i) const {
    return apply(Combination<Dim>::directional(v), u, i);
  }
  [[nodiscard]] Vec<Dim> grad(const Eigen::VectorXd& u, int i) const;

  /// Value at boundary node i that makes the discrete normal derivative equal
  /// `g`, given the current values at the other stencil nodes.
  [[nodiscard]] double neumann(const Eigen::VectorXd& u, int i, const Vec<Dim>& normal, double g) const;

  /// J(k, l) = d u_k / d x_l
  [[nodiscard]] Mat<Dim> grad(const VectorField& u, int i) const;
  [[nodiscard]] double div(const VectorField& u, int i) const;
  [[nodiscard]] Vec<Dim> lap(const VectorField& u, int i) const;
  /// Component k is sum_l d_k d_l u_l.
  [[nodiscard]] Vec<Dim> graddiv(const VectorField& u, int i) const;

 private:
  void check_field(Eigen::Index n) const;
  double component_apply(const Family<Dim>& f, const VectorField& u, int component, int i) const;

  const ShapeStorage<Dim>* storage_;
};

}  // namespace meshfree
