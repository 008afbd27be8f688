#pragma once

#include <vector>

#include "meshfree/approx/engine.hpp"
#include "meshfree/geometry/domain.hpp"
#include "meshfree/operators/combination.hpp"
#include "meshfree/operators/shape_storage.hpp"
#include "meshfree/pde/solver.hpp"

namespace meshfree {

/// L u = f inside, u = g_d on Dirichlet nodes, du/dn = g_n on Neumann nodes.
/// Every boundary node must be listed in exactly one of the node sets.
template <int Dim>
struct BoundaryValueProblem {
  Combination<Dim> op;
  ScalarField<Dim> rhs;
  ScalarField<Dim> dirichlet;
  std::vector<int> dirichlet_nodes;
  ScalarField<Dim> neumann;
  std::vector<int> neumann_nodes;
};

struct ImplicitResult {
  SolveResult solve;
  TimingBreakdown timings;
};

/// Families the problem needs: those of `op` plus first derivatives when
/// there are Neumann nodes.
template <int Dim>
std::vector<Family<Dim>> required_families(const BoundaryValueProblem<Dim>& problem);

/// Assembles and solves using precomputed weights. Fills the assembly,
/// preconditioner and solve stages.
template <int Dim>
ImplicitResult solve_implicit(const DomainDiscretization<Dim>& domain, const ShapeStorage<Dim>& storage,
                              const BoundaryValueProblem<Dim>& problem, const SparseSolverConfig& config);

/// Computes the weights (timed) and solves. Stencils must be present.
template <int Dim>
ImplicitResult solve_implicit(const DomainDiscretization<Dim>& domain, const ApproxEngine<Dim>& engine,
                              const BoundaryValueProblem<Dim>& problem, const SparseSolverConfig& config,
                              int threads = 0);

/// -lap u = f with Dirichlet and Neumann parts.
template <int Dim>
ImplicitResult solve_poisson_implicit(const DomainDiscretization<Dim>& domain, const ApproxEngine<Dim>& engine,
                                      const ScalarField<Dim>& f, const ScalarField<Dim>& g_d,
                                      std::vector<int> dirichlet_nodes, const ScalarField<Dim>& g_n,
                                      std::vector<int> neumann_nodes, const SparseSolverConfig& config,
                                      int threads = 0);

}  // namespace meshfree
