#pragma once

#include <Eigen/Core>

#include "meshfree/operators/sparse_system.hpp"
#include "meshfree/pde/timing.hpp"

namespace meshfree {

/// BiCGSTAB, optionally preconditioned with ILUT(fill, drop).
struct SparseSolverConfig {
  enum class Preconditioner { none, ilut };

  Preconditioner preconditioner = Preconditioner::ilut;
  int fill = 5;
  double drop = 1e-2;
  /// Relative residual |M u - r| / |r|.
  double tol = 1e-10;
  /// 0 means 10 N.
  int max_iter = 0;

  /// Throws ConfigError for out-of-range values.
  void validate() const;
};

struct SolveResult {
  Eigen::VectorXd u;
  int iterations = 0;
  /// Relative residual recomputed from M, u and r.
  double residual = 0.0;
  bool converged = false;
};

/// Solves a finalized system. A run that does not reach `tol` returns the
/// best iterate with converged = false. Preconditioner and iteration times
/// are added to `timings` when given.
SolveResult solve_sparse(const SparseSystem& system, const SparseSolverConfig& config,
                         TimingBreakdown* timings = nullptr);

SolveResult solve_sparse(const SparseSystem::Matrix& matrix, const Eigen::VectorXd& rhs,
                         const SparseSolverConfig& config, TimingBreakdown* timings = nullptr);

/// |M u - r| / |r|, or |M u| when r = 0.
double relative_residual(const SparseSystem::Matrix& matrix, const Eigen::VectorXd& rhs, const Eigen::VectorXd& u);

}  // namespace meshfree
