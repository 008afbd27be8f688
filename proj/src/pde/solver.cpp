#include "meshfree/pde/solver.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include <Eigen/IterativeLinearSolvers>

#include "meshfree/core/errors.hpp"

namespace meshfree {

namespace {

constexpr int kMaxRestarts = 10;

template <class Solver>
SolveResult iterate(Solver& solver, const SparseSystem::Matrix& m, const Eigen::VectorXd& rhs,
                    const SparseSolverConfig& config, int max_iter, TimingBreakdown* timings) {
  std::optional<StageTimer> timer;
  if (timings) timer.emplace(*timings, Stage::iterative_solve);
  SolveResult best;
  best.u = Eigen::VectorXd::Zero(rhs.size());
  best.residual = relative_residual(m, rhs, best.u);
  best.converged = best.residual <= config.tol;
  if (best.converged) return best;

  solver.setTolerance(config.tol);
  Eigen::VectorXd guess = best.u;
  int used = 0;
  // BiCGSTAB may stop on its own residual estimate; restart from the iterate
  // while the recomputed residual is still above tolerance.
  for (int restart = 0; restart <= kMaxRestarts && used < max_iter; ++restart) {
    solver.setMaxIterations(max_iter - used);
    Eigen::VectorXd next = solver.solveWithGuess(rhs, guess);
    used += static_cast<int>(solver.iterations());
    const double res = relative_residual(m, rhs, next);
    if (std::isfinite(res) && res < best.residual) {
      best.u = next;
      best.residual = res;
    }
    best.iterations = used;
    if (best.residual <= config.tol) {
      best.converged = true;
      break;
    }
    if (solver.iterations() == 0 || !std::isfinite(res)) break;
    guess = best.u;
  }
  return best;
}

}  // namespace

void SparseSolverConfig::validate() const {
  if (!(tol > 0.0 && tol < 1.0)) throw ConfigError("solver tolerance must lie in (0, 1)");
  if (max_iter < 0) throw ConfigError("max_iter must be nonnegative");
  if (preconditioner == Preconditioner::ilut) {
    if (fill < 1) throw ConfigError("ILUT fill factor must be positive");
    if (!(drop >= 0.0)) throw ConfigError("ILUT drop tolerance must be nonnegative");
  }
}

double relative_residual(const SparseSystem::Matrix& matrix, const Eigen::VectorXd& rhs, const Eigen::VectorXd& u) {
  const double r = (matrix * u - rhs).norm();
  const double scale = rhs.norm();
  return scale > 0.0 ? r / scale : r;
}

SolveResult solve_sparse(const SparseSystem::Matrix& matrix, const Eigen::VectorXd& rhs,
                         const SparseSolverConfig& config, TimingBreakdown* timings) {
  config.validate();
  if (matrix.rows() != matrix.cols()) throw NumericalError("sparse system is not square");
  if (matrix.rows() != rhs.size()) throw NumericalError("right-hand side size does not match the matrix");
  const int n = static_cast<int>(matrix.rows());
  const int max_iter = config.max_iter > 0 ? config.max_iter : std::max(1, 10 * n);

  if (config.preconditioner == SparseSolverConfig::Preconditioner::ilut) {
    Eigen::BiCGSTAB<SparseSystem::Matrix, Eigen::IncompleteLUT<double>> solver;
    solver.preconditioner().setFillfactor(config.fill);
    solver.preconditioner().setDroptol(config.drop);
    {
      std::optional<StageTimer> timer;
      if (timings) timer.emplace(*timings, Stage::preconditioner);
      solver.compute(matrix);
    }
    if (solver.preconditioner().info() != Eigen::Success) {
      throw NumericalError("ILUT factorization failed; the matrix is structurally singular");
    }
    return iterate(solver, matrix, rhs, config, max_iter, timings);
  }
  Eigen::BiCGSTAB<SparseSystem::Matrix, Eigen::IdentityPreconditioner> solver;
  {
    std::optional<StageTimer> timer;
    if (timings) timer.emplace(*timings, Stage::preconditioner);
    solver.compute(matrix);
  }
  return iterate(solver, matrix, rhs, config, max_iter, timings);
}

SolveResult solve_sparse(const SparseSystem& system, const SparseSolverConfig& config, TimingBreakdown* timings) {
  return solve_sparse(system.matrix(), system.rhs(), config, timings);
}

}  // namespace meshfree
