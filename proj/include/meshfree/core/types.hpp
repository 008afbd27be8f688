#pragma once

#include <Eigen/Core>
#include <functional>

namespace meshfree {

template <int Dim>
using Vec = Eigen::Matrix<double, Dim, 1>;

template <int Dim>
using Mat = Eigen::Matrix<double, Dim, Dim>;

/// Target nodal spacing as a function of position.
template <int Dim>
using SpacingFunction = std::function<double(const Vec<Dim>&)>;

template <int Dim>
using ScalarField = std::function<double(const Vec<Dim>&)>;

template <int Dim>
SpacingFunction<Dim> constant_spacing(double h) {
  return [h](const Vec<Dim>&) { return h; };
}

}  // namespace meshfree
