#pragma once

#include <cmath>
#include <variant>

#include "meshfree/core/types.hpp"

namespace meshfree {

struct ConstantWeight {};

/// exp(-(|x|/sigma)^2)
struct GaussianWeight {
  double sigma = 1.0;
};

using WeightFunction = std::variant<ConstantWeight, GaussianWeight>;

template <int Dim>
double eval_weight(const WeightFunction& w, const Vec<Dim>& x) {
  if (const auto* g = std::get_if<GaussianWeight>(&w)) return std::exp(-x.squaredNorm() / (g->sigma * g->sigma));
  return 1.0;
}

}  // namespace meshfree
