#include "meshfree/pde/scenarios.hpp"

#include <cmath>

#include "meshfree/core/errors.hpp"
#include "meshfree/geometry/shape.hpp"
#include "meshfree/geometry/stencil.hpp"
#include "meshfree/pde/heat.hpp"

namespace meshfree {

Heat2DOutcome run_heat2d(const Heat2DSetup& setup) {
  if (!(setup.dt_factor > 0.0)) throw ConfigError("dt_factor must be positive");
  if (!(setup.end_time > 0.0)) throw ConfigError("end_time must be positive");
  Heat2DOutcome out;
  const auto shape = Shape<2>::ball(Vec<2>::Zero(), 1.0, -1) - Shape<2>::ball(Vec<2>(0.2, 0.1), 0.35, -2);
  out.domain = shape.discretize(constant_spacing<2>(setup.h), setup.seed);
  auto& domain = out.domain;
  const auto neumann_nodes = domain.with_type(-2);
  find_closest_stencils<2>(domain, setup.stencil_size);
  find_neumann_stencils<2>(domain, setup.stencil_size, neumann_nodes);

  const std::vector<Family<2>> families{Family<2>::laplacian(), Family<2>::derivative(0),
                                        Family<2>::derivative(1)};
  const auto storage = compute_shapes<2>(domain, setup.engine, families, setup.threads);

  HeatProblem<2> problem;
  problem.initial = [](const Vec<2>&) { return 0.0; };
  problem.source = [](const Vec<2>&, double) { return 5.0; };
  problem.dirichlet = [](const Vec<2>& p, double) { return p[0]; };
  problem.dirichlet_nodes = domain.with_type(-1);
  problem.neumann = [](const Vec<2>&, double) { return 0.0; };
  problem.neumann_nodes = neumann_nodes;

  const double h_min = min_node_distance(domain);
  out.dt = setup.dt_factor * h_min * h_min / 4.0;
  out.steps = static_cast<int>(std::ceil(setup.end_time / out.dt));
  const auto heat = run_heat_explicit(domain, storage, problem, {out.dt, out.steps, 0});
  out.explicit_u = heat.u;
  out.last_change = heat.last_change;

  BoundaryValueProblem<2> steady;
  steady.op = Combination<2>().add(-1.0, Family<2>::laplacian());
  steady.rhs = [](const Vec<2>&) { return 5.0; };
  steady.dirichlet = [](const Vec<2>& p) { return p[0]; };
  steady.dirichlet_nodes = problem.dirichlet_nodes;
  steady.neumann = [](const Vec<2>&) { return 0.0; };
  steady.neumann_nodes = problem.neumann_nodes;
  const auto implicit = solve_implicit(domain, storage, steady, setup.solver);
  if (!implicit.solve.converged) throw NumericalError("steady heat solve did not converge");
  out.steady_solve = implicit.solve;
  out.steady_u = implicit.solve.u;
  out.e_inf = (out.explicit_u - out.steady_u).cwiseAbs().maxCoeff();
  return out;
}

ConvDiff3DOutcome run_convdiff3d(const ConvDiff3DSetup& setup) {
  ConvDiff3DOutcome out;
  auto& timings = out.result.timings;
  auto& domain = out.domain;
  {
    StageTimer timer(timings, Stage::domain_discretization);
    const auto shape =
        Shape<3>::ball(Vec<3>::Zero(), 1.0) - Shape<3>::box(Vec<3>::Constant(-0.3), Vec<3>::Constant(0.3), -2);
    domain = shape.discretize(constant_spacing<3>(setup.h), setup.seed);
  }
  const auto interior = domain.interior();
  {
    StageTimer timer(timings, Stage::stencil_selection);
    const auto all = domain.all();
    find_closest_stencils<3>(domain, setup.stencil_size, interior, all);
  }
  BoundaryValueProblem<3> problem;
  problem.op = Combination<3>().add(-2.0, Family<3>::laplacian()) +
               8.0 * Combination<3>::directional(Vec<3>(2.0, 1.0, -1.0));
  problem.rhs = [](const Vec<3>&) { return 1.0; };
  problem.dirichlet = [](const Vec<3>&) { return 0.0; };
  problem.dirichlet_nodes = domain.boundary();
  ShapeStorage<3> storage;
  {
    StageTimer timer(timings, Stage::weight_computation);
    storage = compute_shapes<3>(domain, setup.engine, required_families(problem), interior, setup.threads);
  }
  const auto result = solve_implicit(domain, storage, problem, setup.solver);
  out.result.solve = result.solve;
  for (Stage s : {Stage::matrix_assembly, Stage::preconditioner, Stage::iterative_solve})
    timings[s] = result.timings[s];
  return out;
}

}  // namespace meshfree
