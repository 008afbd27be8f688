#pragma once

#include <memory>
#include <string>

#include "meshfree/approx/operator.hpp"

namespace meshfree {

/// One operator whose weights are stored per node: the identity, a first or
/// second derivative (upper triangle only), the Laplacian or a named custom
/// operator.
template <int Dim>
class Family {
 public:
  enum class Kind { identity, derivative1, derivative2, laplacian, custom };

  static Family identity() { return Family(Kind::identity); }
  static Family derivative(int axis);
  /// Stored as (min, max) so that d2(1, 0) and d2(0, 1) name the same family.
  static Family derivative(int axis1, int axis2);
  static Family laplacian() { return Family(Kind::laplacian); }
  static Family custom(std::shared_ptr<const CustomOperator<Dim>> impl);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] int axis1() const { return axis1_; }
  [[nodiscard]] int axis2() const { return axis2_; }
  /// Short stable name: identity, d_0, d_0_1, lap, custom:<name>.
  [[nodiscard]] std::string label() const;
  [[nodiscard]] Operator<Dim> to_operator() const;

  friend bool operator==(const Family& a, const Family& b) {
    if (a.kind_ != b.kind_ || a.axis1_ != b.axis1_ || a.axis2_ != b.axis2_) return false;
    return a.kind_ != Kind::custom || a.custom_->name() == b.custom_->name();
  }

 private:
  explicit Family(Kind kind) : kind_(kind) {}
  Kind kind_;
  int axis1_ = -1;
  int axis2_ = -1;
  std::shared_ptr<const CustomOperator<Dim>> custom_;
};

/// identity, all first derivatives, the upper triangle of second derivatives
/// and the Laplacian.
template <int Dim>
std::vector<Family<Dim>> all_standard_families();

/// Laplacian and first derivatives, enough for Poisson problems with
/// Neumann conditions.
template <int Dim>
std::vector<Family<Dim>> laplacian_and_gradient();

}  // namespace meshfree
