#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "meshfree/approx/engine.hpp"
#include "meshfree/geometry/domain.hpp"
#include "meshfree/pde/implicit_solve.hpp"
#include "meshfree/pde/solver.hpp"
#include "meshfree/pde/timing.hpp"

namespace meshfree {

/// du/dt = lap u + 5 on B(0,1) \ B((0.2, 0.1), 0.35), u = 0 at t = 0,
/// u = x on the outer circle (tag -1), du/dn = 0 on the inner circle (tag -2).
struct Heat2DSetup {
  double h = 0.042;
  int stencil_size = 12;
  ApproxEngine<2> engine = RBFFD<2>{Polyharmonic{3}, 2, Scale::support_radius, DenseSolver::qr};
  /// dt = dt_factor * h_min^2 / 4.
  double dt_factor = 0.5;
  double end_time = 6.0;
  std::uint64_t seed = 0;
  int threads = 0;
  SparseSolverConfig solver;
};

struct Heat2DOutcome {
  DomainDiscretization<2> domain;
  Eigen::VectorXd explicit_u;
  /// Implicit solve of -lap u = 5 with the same boundary conditions.
  Eigen::VectorXd steady_u;
  double dt = 0.0;
  int steps = 0;
  double last_change = 0.0;
  /// max |explicit_u - steady_u|.
  double e_inf = 0.0;
  SolveResult steady_solve;
};

Heat2DOutcome run_heat2d(const Heat2DSetup& setup);

/// -2 lap u + 8 (2, 1, -1) . grad u = 1 on B(0,1) \ [-0.3, 0.3]^3, u = 0 on
/// the boundary.
struct ConvDiff3DSetup {
  double h = 0.07;
  int stencil_size = 35;
  ApproxEngine<3> engine = RBFFD<3>{Polyharmonic{3}, 2, Scale::support_radius, DenseSolver::qr};
  std::uint64_t seed = 0;
  int threads = 0;
  SparseSolverConfig solver;
};

struct ConvDiff3DOutcome {
  DomainDiscretization<3> domain;
  ImplicitResult result;
};

ConvDiff3DOutcome run_convdiff3d(const ConvDiff3DSetup& setup);

}  // namespace meshfree
