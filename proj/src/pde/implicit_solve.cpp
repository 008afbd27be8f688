#include "meshfree/pde/implicit_solve.hpp"

#include <algorithm>

#include "meshfree/core/errors.hpp"
#include "meshfree/operators/implicit.hpp"
#include "roles.hpp"

namespace meshfree {

template <int Dim>
std::vector<Family<Dim>> required_families(const BoundaryValueProblem<Dim>& problem) {
  std::vector<Family<Dim>> out;
  auto add = [&](const Family<Dim>& f) {
    if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
  };
  for (const auto& t : problem.op.terms()) add(t.family);
  if (!problem.neumann_nodes.empty())
    for (int a = 0; a < Dim; ++a) add(Family<Dim>::derivative(a));
  return out;
}

template <int Dim>
ImplicitResult solve_implicit(const DomainDiscretization<Dim>& domain, const ShapeStorage<Dim>& storage,
                              const BoundaryValueProblem<Dim>& problem, const SparseSolverConfig& config) {
  if (problem.op.empty()) throw ConfigError("boundary value problem has no operator");
  if (!problem.rhs) throw ConfigError("boundary value problem has no right-hand side");
  if (!problem.dirichlet_nodes.empty() && !problem.dirichlet) throw ConfigError("Dirichlet data missing");
  if (!problem.neumann_nodes.empty() && !problem.neumann) throw ConfigError("Neumann data missing");
  const auto roles = detail::classify_nodes(domain, problem.dirichlet_nodes, problem.neumann_nodes);

  ImplicitResult result;
  SparseSystem system(domain.size());
  {
    StageTimer timer(result.timings, Stage::matrix_assembly);
    for (int i = 0; i < domain.size(); ++i) {
      const auto& p = domain.pos(i);
      switch (roles[i]) {
        case detail::Role::interior:
          assemble_interior_row(system, storage, i, problem.op, problem.rhs(p));
          break;
        case detail::Role::dirichlet:
          assemble_dirichlet_row(system, i, problem.dirichlet(p));
          break;
        case detail::Role::neumann:
          assemble_neumann_row(system, storage, i, domain.normal(i), problem.neumann(p));
          break;
      }
    }
    system.finalize();
  }
  result.solve = solve_sparse(system, config, &result.timings);
  return result;
}

template <int Dim>
ImplicitResult solve_implicit(const DomainDiscretization<Dim>& domain, const ApproxEngine<Dim>& engine,
                              const BoundaryValueProblem<Dim>& problem, const SparseSolverConfig& config,
                              int threads) {
  const auto roles = detail::classify_nodes(domain, problem.dirichlet_nodes, problem.neumann_nodes);
  std::vector<int> nodes;
  for (int i = 0; i < domain.size(); ++i)
    if (roles[i] != detail::Role::dirichlet) nodes.push_back(i);
  TimingBreakdown weights_time;
  ShapeStorage<Dim> storage;
  {
    StageTimer timer(weights_time, Stage::weight_computation);
    storage = compute_shapes<Dim>(domain, engine, required_families(problem), nodes, threads);
  }
  ImplicitResult result = solve_implicit(domain, storage, problem, config);
  result.timings[Stage::weight_computation] = weights_time[Stage::weight_computation];
  return result;
}

template <int Dim>
ImplicitResult solve_poisson_implicit(const DomainDiscretization<Dim>& domain, const ApproxEngine<Dim>& engine,
                                      const ScalarField<Dim>& f, const ScalarField<Dim>& g_d,
                                      std::vector<int> dirichlet_nodes, const ScalarField<Dim>& g_n,
                                      std::vector<int> neumann_nodes, const SparseSolverConfig& config,
                                      int threads) {
  BoundaryValueProblem<Dim> problem;
  problem.op = Combination<Dim>().add(-1.0, Family<Dim>::laplacian());
  problem.rhs = f;
  problem.dirichlet = g_d;
  problem.dirichlet_nodes = std::move(dirichlet_nodes);
  problem.neumann = g_n;
  problem.neumann_nodes = std::move(neumann_nodes);
  return solve_implicit<Dim>(domain, engine, problem, config, threads);
}

#define MESHFREE_INSTANTIATE(D)                                                                                \
  template std::vector<Family<D>> required_families<D>(const BoundaryValueProblem<D>&);                        \
  template ImplicitResult solve_implicit<D>(const DomainDiscretization<D>&, const ShapeStorage<D>&,            \
                                            const BoundaryValueProblem<D>&, const SparseSolverConfig&);        \
  template ImplicitResult solve_implicit<D>(const DomainDiscretization<D>&, const ApproxEngine<D>&,            \
                                            const BoundaryValueProblem<D>&, const SparseSolverConfig&, int);   \
  template ImplicitResult solve_poisson_implicit<D>(const DomainDiscretization<D>&, const ApproxEngine<D>&,    \
                                                    const ScalarField<D>&, const ScalarField<D>&,              \
                                                    std::vector<int>, const ScalarField<D>&, std::vector<int>, \
                                                    const SparseSolverConfig&, int);
MESHFREE_INSTANTIATE(1)
MESHFREE_INSTANTIATE(2)
MESHFREE_INSTANTIATE(3)
#undef MESHFREE_INSTANTIATE

}  // namespace meshfree
