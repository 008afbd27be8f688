#include "meshfree/approx/engine.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "meshfree/core/errors.hpp"

namespace meshfree {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kSvdThreshold = 1e-13;

template <int Dim>
double scale_factor(Scale rule, std::span<const Vec<Dim>> points, const Vec<Dim>& center) {
  if (rule == Scale::none) return 1.0;
  double nearest = std::numeric_limits<double>::infinity();
  double farthest = 0.0;
  for (const auto& p : points) {
    const double d = (p - center).norm();
    if (d > 0.0) nearest = std::min(nearest, d);
    farthest = std::max(farthest, d);
  }
  // A stencil made of the centre alone has no length scale.
  if (farthest == 0.0) return 1.0;
  return rule == Scale::nearest_neighbor ? nearest : farthest;
}

using Factorization = std::variant<std::monostate, Eigen::PartialPivLU<MatrixXd>,
                                   Eigen::CompleteOrthogonalDecomposition<MatrixXd>,
                                   Eigen::ColPivHouseholderQR<MatrixXd>, Eigen::JacobiSVD<MatrixXd>>;

void factor_lu(Factorization& f, const MatrixXd& m) {
  auto& lu = f.emplace<Eigen::PartialPivLU<MatrixXd>>(m);
  const auto diag = lu.matrixLU().diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (diag[i] == 0.0 || !std::isfinite(diag[i])) {
      throw NumericalError("local system is singular under LU; use the qr or svd solver");
    }
  }
}

void factor_svd(Factorization& f, const MatrixXd& m) {
  auto& svd = f.emplace<Eigen::JacobiSVD<MatrixXd>>(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(kSvdThreshold);
}

VectorXd solve_with(const Factorization& f, const VectorXd& rhs) {
  VectorXd x = std::visit(
      [&](const auto& s) -> VectorXd {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, std::monostate>) {
          throw NumericalError("local system was not factorized");
        } else {
          return s.solve(rhs);
        }
      },
      f);
  if (!x.allFinite()) throw NumericalError("local system produced non-finite weights");
  return x;
}

}  // namespace

template <int Dim>
int min_support_size(const ApproxEngine<Dim>& engine) {
  if (const auto* r = std::get_if<RBFFD<Dim>>(&engine)) return std::max(1, monomial_count(r->augmentation, Dim));
  const auto& g = std::get<GWLS<Dim>>(engine);
  if (const auto* m = std::get_if<Monomials<Dim>>(&g.basis)) return std::max(1, m->size());
  return 1;
}

template <int Dim>
struct LocalApproximation<Dim>::Impl {
  ApproxEngine<Dim> engine;
  std::vector<Vec<Dim>> scaled;
  double s = 1.0;
  VectorXd w_diag;
  Monomials<Dim> augmentation;
  Factorization factor;

  [[nodiscard]] int n() const { return static_cast<int>(scaled.size()); }

  void setup_gwls(const GWLS<Dim>& g) {
    const int n_pts = n();
    w_diag.resize(n_pts);
    for (int i = 0; i < n_pts; ++i) {
      w_diag[i] = eval_weight<Dim>(g.weight, scaled[i]);
      if (!(w_diag[i] > 0.0)) throw NumericalError("weight function must be strictly positive");
    }
    MatrixXd b;
    if (const auto* mono = std::get_if<Monomials<Dim>>(&g.basis)) {
      b.resize(n_pts, mono->size());
      for (int i = 0; i < n_pts; ++i)
        for (int j = 0; j < mono->size(); ++j) b(i, j) = mono->eval(j, scaled[i]);
    } else {
      const Rbf& rbf = std::get<Rbf>(g.basis);
      validate(rbf);
      b.resize(n_pts, n_pts);
      for (int i = 0; i < n_pts; ++i)
        for (int j = 0; j < n_pts; ++j) b(i, j) = rbf_value(rbf, (scaled[i] - scaled[j]).norm());
    }
    if (b.cols() == 0) throw ConfigError("least squares basis is empty");
    if (b.cols() > n_pts) {
      throw NumericalError("basis of size " + std::to_string(b.cols()) + " exceeds the " + std::to_string(n_pts) +
                           " stencil nodes; enlarge the stencil");
    }
    const MatrixXd system = (w_diag.asDiagonal() * b).transpose();
    switch (g.solver) {
      case DenseSolver::lu:
        if (system.rows() != system.cols()) {
          throw ConfigError("the lu solver needs a square system (basis size equal to stencil size)");
        }
        factor_lu(factor, system);
        break;
      case DenseSolver::qr:
        factor.template emplace<Eigen::CompleteOrthogonalDecomposition<MatrixXd>>(system);
        break;
      case DenseSolver::svd:
        factor_svd(factor, system);
        break;
    }
  }

  void setup_rbffd(const RBFFD<Dim>& r) {
    validate(r.rbf);
    if (r.augmentation < -1) throw ConfigError("augmentation degree must be >= -1");
    augmentation = Monomials<Dim>(r.augmentation);
    const int n_pts = n();
    const int l = augmentation.size();
    if (n_pts < l) {
      throw NumericalError("augmentation of degree " + std::to_string(r.augmentation) + " needs at least " +
                           std::to_string(l) + " stencil nodes, got " + std::to_string(n_pts));
    }
    MatrixXd system = MatrixXd::Zero(n_pts + l, n_pts + l);
    for (int i = 0; i < n_pts; ++i) {
      for (int j = 0; j < n_pts; ++j) system(i, j) = rbf_value(r.rbf, (scaled[i] - scaled[j]).norm());
      for (int k = 0; k < l; ++k) {
        const double q = augmentation.eval(k, scaled[i]);
        system(i, n_pts + k) = q;
        system(n_pts + k, i) = q;
      }
    }
    switch (r.solver) {
      case DenseSolver::lu:
        factor_lu(factor, system);
        break;
      case DenseSolver::qr: {
        auto& qr = factor.template emplace<Eigen::ColPivHouseholderQR<MatrixXd>>(system);
        if (qr.rank() < system.rows()) {
          throw NumericalError("RBF-FD system is singular (rank " + std::to_string(qr.rank()) + " of " +
                               std::to_string(system.rows()) +
                               "); the stencil may lie on a polynomial zero set, try a larger stencil");
        }
        break;
      }
      case DenseSolver::svd:
        factor_svd(factor, system);
        break;
    }
  }

  [[nodiscard]] VectorXd weights(const Operator<Dim>& op) const {
    const int n_pts = n();
    const Vec<Dim> origin = Vec<Dim>::Zero();
    if (const auto* g = std::get_if<GWLS<Dim>>(&engine)) {
      VectorXd rhs;
      if (const auto* mono = std::get_if<Monomials<Dim>>(&g->basis)) {
        rhs.resize(mono->size());
        for (int j = 0; j < mono->size(); ++j) rhs[j] = apply_operator_to_basis<Dim>(op, mono->exponents(j), origin, s);
      } else {
        const Rbf& rbf = std::get<Rbf>(g->basis);
        rhs.resize(n_pts);
        for (int j = 0; j < n_pts; ++j) rhs[j] = apply_operator_to_basis<Dim>(op, rbf, Vec<Dim>(-scaled[j]), s);
      }
      return w_diag.asDiagonal() * solve_with(factor, rhs);
    }
    const auto& r = std::get<RBFFD<Dim>>(engine);
    const int l = augmentation.size();
    VectorXd rhs(n_pts + l);
    for (int j = 0; j < n_pts; ++j) rhs[j] = apply_operator_to_basis<Dim>(op, r.rbf, Vec<Dim>(-scaled[j]), s);
    for (int k = 0; k < l; ++k) rhs[n_pts + k] = apply_operator_to_basis<Dim>(op, augmentation.exponents(k), origin, s);
    return solve_with(factor, rhs).head(n_pts);
  }
};

template <int Dim>
LocalApproximation<Dim>::LocalApproximation(const ApproxEngine<Dim>& engine, std::span<const Vec<Dim>> points,
                                            const Vec<Dim>& center)
    : impl_(std::make_unique<Impl>()) {
  if (points.empty()) throw NumericalError("stencil is empty");
  for (const auto& p : points) {
    if (!p.allFinite()) throw NumericalError("stencil contains a non-finite point");
  }
  impl_->engine = engine;
  const Scale rule = std::visit([](const auto& e) { return e.scale; }, engine);
  impl_->s = scale_factor<Dim>(rule, points, center);
  impl_->scaled.reserve(points.size());
  for (const auto& p : points) impl_->scaled.push_back((p - center) / impl_->s);
  if (const auto* g = std::get_if<GWLS<Dim>>(&engine)) {
    impl_->setup_gwls(*g);
  } else {
    impl_->setup_rbffd(std::get<RBFFD<Dim>>(engine));
  }
}

template <int Dim>
LocalApproximation<Dim>::~LocalApproximation() = default;
template <int Dim>
LocalApproximation<Dim>::LocalApproximation(LocalApproximation&&) noexcept = default;
template <int Dim>
LocalApproximation<Dim>& LocalApproximation<Dim>::operator=(LocalApproximation&&) noexcept = default;

template <int Dim>
Eigen::VectorXd LocalApproximation<Dim>::weights(const Operator<Dim>& op) const {
  return impl_->weights(op);
}

template <int Dim>
double LocalApproximation<Dim>::scale() const {
  return impl_->s;
}

template <int Dim>
Eigen::VectorXd compute_weights(const ApproxEngine<Dim>& engine, std::span<const Vec<Dim>> points,
                                const Vec<Dim>& center, const Operator<Dim>& op) {
  return LocalApproximation<Dim>(engine, points, center).weights(op);
}

#define MESHFREE_INSTANTIATE(D)                                                                          \
  template int min_support_size<D>(const ApproxEngine<D>&);                                              \
  template class LocalApproximation<D>;                                                                  \
  template Eigen::VectorXd compute_weights<D>(const ApproxEngine<D>&, std::span<const Vec<D>>,           \
                                              const Vec<D>&, const Operator<D>&);
MESHFREE_INSTANTIATE(1)
MESHFREE_INSTANTIATE(2)
MESHFREE_INSTANTIATE(3)
#undef MESHFREE_INSTANTIATE

}  // namespace meshfree
