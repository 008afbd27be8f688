#pragma once

#include <memory>
#include <span>
#include <variant>

#include <Eigen/Core>

#include "meshfree/approx/monomials.hpp"
#include "meshfree/approx/operator.hpp"
#include "meshfree/approx/rbf.hpp"
#include "meshfree/approx/weight.hpp"

namespace meshfree {

/// How the local coordinates (p - p*) / s are scaled.
enum class Scale {
  none,              ///< s = 1
  nearest_neighbor,  ///< s = distance from p* to the closest other stencil node
  support_radius,    ///< s = distance from p* to the farthest stencil node
};

enum class DenseSolver { lu, qr, svd };

/// Weighted least squares over a monomial or RBF basis.
template <int Dim>
struct GWLS {
  std::variant<Monomials<Dim>, Rbf> basis = Monomials<Dim>(2);
  WeightFunction weight = ConstantWeight{};
  Scale scale = Scale::support_radius;
  DenseSolver solver = DenseSolver::qr;
};

/// RBF-FD with optional monomial augmentation (`augmentation` = -1 disables it).
template <int Dim>
struct RBFFD {
  Rbf rbf = Polyharmonic{3};
  int augmentation = 2;
  Scale scale = Scale::support_radius;
  DenseSolver solver = DenseSolver::qr;
};

template <int Dim>
using ApproxEngine = std::variant<GWLS<Dim>, RBFFD<Dim>>;

/// Minimum stencil size accepted by the engine.
template <int Dim>
int min_support_size(const ApproxEngine<Dim>& engine);

/// Local system for one stencil, factorized once and reused for every
/// operator. Weights are aligned with the given points.
template <int Dim>
class LocalApproximation {
 public:
  LocalApproximation(const ApproxEngine<Dim>& engine, std::span<const Vec<Dim>> points, const Vec<Dim>& center);
  ~LocalApproximation();
  LocalApproximation(LocalApproximation&&) noexcept;
  LocalApproximation& operator=(LocalApproximation&&) noexcept;

  [[nodiscard]] Eigen::VectorXd weights(const Operator<Dim>& op) const;
  [[nodiscard]] double scale() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

template <int Dim>
Eigen::VectorXd compute_weights(const ApproxEngine<Dim>& engine, std::span<const Vec<Dim>> points,
                                const Vec<Dim>& center, const Operator<Dim>& op);

template <int Dim>
Eigen::VectorXd gwls_weights(const GWLS<Dim>& engine, std::span<const Vec<Dim>> points, const Vec<Dim>& center,
                             const Operator<Dim>& op) {
  return compute_weights<Dim>(engine, points, center, op);
}

template <int Dim>
Eigen::VectorXd rbffd_weights(const RBFFD<Dim>& engine, std::span<const Vec<Dim>> points, const Vec<Dim>& center,
                              const Operator<Dim>& op) {
  return compute_weights<Dim>(engine, points, center, op);
}

}  // namespace meshfree
