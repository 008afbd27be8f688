#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "meshfree/core/errors.hpp"
#include "meshfree/geometry/shape.hpp"
#include "meshfree/geometry/stencil.hpp"
#include "meshfree/operators/implicit.hpp"
#include "meshfree/pde/convergence.hpp"
#include "meshfree/pde/heat.hpp"
#include "meshfree/pde/implicit_solve.hpp"
#include "meshfree/pde/scenarios.hpp"

using namespace meshfree;
using Eigen::VectorXd;

namespace {

constexpr double kPi = std::numbers::pi;

SparseSystem diagonal_system(int n, double d) {
  SparseSystem s(n);
  for (int i = 0; i < n; ++i) {
    s.begin_row(i, i, RowKind::dirichlet);
    s.add(i, i, d);
    s.set_rhs(i, i + 1.0);
  }
  s.finalize();
  return s;
}

DomainDiscretization<1> line(int n) {
  DomainDiscretization<1> d;
  d.add_boundary_node(Vec<1>(0.0), -1, Vec<1>(-1.0));
  for (int i = 1; i < n - 1; ++i) d.add_internal_node(Vec<1>(static_cast<double>(i) / (n - 1)));
  d.add_boundary_node(Vec<1>(1.0), -1, Vec<1>(1.0));
  return d;
}

struct HeatFixture {
  DomainDiscretization<2> domain;
  ShapeStorage<2> storage;
  HeatProblem<2> problem;
};

HeatFixture small_heat(double h) {
  HeatFixture f;
  const auto shape = Shape<2>::ball({0, 0}, 1.0, -1) - Shape<2>::ball({0.2, 0.1}, 0.35, -2);
  f.domain = shape.discretize(constant_spacing<2>(h), 5);
  find_closest_stencils(f.domain, 12);
  const auto neumann = f.domain.with_type(-2);
  find_neumann_stencils<2>(f.domain, 12, neumann);
  f.storage = compute_shapes<2>(f.domain, RBFFD<2>{},
                                {Family<2>::laplacian(), Family<2>::derivative(0), Family<2>::derivative(1)});
  f.problem.initial = [](const Vec<2>&) { return 0.0; };
  f.problem.source = [](const Vec<2>&, double) { return 5.0; };
  f.problem.dirichlet = [](const Vec<2>& p, double t) { return p[0] * (1.0 + t); };
  f.problem.dirichlet_nodes = f.domain.with_type(-1);
  f.problem.neumann = [](const Vec<2>&, double) { return 0.0; };
  f.problem.neumann_nodes = neumann;
  return f;
}

}  // namespace

TEST(SparseSolver, IdentitySolvesInOneIteration) {
  const auto s = diagonal_system(20, 1.0);
  const auto r = solve_sparse(s, {});
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iterations, 1);
  for (int i = 0; i < 20; ++i) EXPECT_NEAR(r.u[i], i + 1.0, 1e-12);
}

TEST(SparseSolver, ScaledIdentity) {
  const auto s = diagonal_system(20, 2.0);
  for (auto pre : {SparseSolverConfig::Preconditioner::ilut, SparseSolverConfig::Preconditioner::none}) {
    SparseSolverConfig cfg;
    cfg.preconditioner = pre;
    const auto r = solve_sparse(s, cfg);
    ASSERT_TRUE(r.converged);
    for (int i = 0; i < 20; ++i) EXPECT_NEAR(r.u[i], (i + 1.0) / 2.0, 1e-12);
  }
}

TEST(SparseSolver, ZeroRhsGivesZero) {
  SparseSystem s(3);
  for (int i = 0; i < 3; ++i) {
    s.begin_row(i, i, RowKind::dirichlet);
    s.add(i, i, 3.0);
  }
  s.finalize();
  const auto r = solve_sparse(s, {});
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.u.norm(), 0.0);
}

TEST(SparseSolver, ConfigValidation) {
  SparseSolverConfig cfg;
  cfg.tol = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.tol = 1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.fill = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.max_iter = -1;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(SparseSolver, StructurallySingularFails) {
  SparseSystem::Matrix m(2, 2);
  m.insert(0, 0) = 1.0;
  m.insert(0, 1) = 1.0;
  m.insert(1, 1) = 0.0;
  m.makeCompressed();
  EXPECT_THROW(solve_sparse(m, VectorXd::Ones(2), {}), NumericalError);
}

TEST(SparseSolver, Poisson1DAndResidualContract) {
  auto d = line(101);
  find_closest_stencils(d, 3);
  const std::vector<int> bc{0, 100};
  ScalarField<1> f = [](const Vec<1>& x) { return kPi * kPi * std::sin(kPi * x[0]); };
  ScalarField<1> zero = [](const Vec<1>&) { return 0.0; };
  const auto res = solve_poisson_implicit<1>(d, GWLS<1>{}, f, zero, bc, zero, {}, {}, 1);
  ASSERT_TRUE(res.solve.converged);
  double e = 0.0;
  for (int i = 0; i < d.size(); ++i) e = std::max(e, std::abs(res.solve.u[i] - std::sin(kPi * d.pos(i)[0])));
  EXPECT_LE(e, 1e-3);

  // Rebuild the system to recompute the residual independently.
  BoundaryValueProblem<1> bvp;
  bvp.op = Combination<1>().add(-1.0, Family<1>::laplacian());
  bvp.rhs = f;
  bvp.dirichlet = zero;
  bvp.dirichlet_nodes = bc;
  const auto storage = compute_shapes<1>(d, GWLS<1>{}, {Family<1>::laplacian()});
  SparseSystem s(d.size());
  for (int i = 1; i < 100; ++i) assemble_interior_row(s, storage, i, bvp.op, f(d.pos(i)));
  for (int i : bc) assemble_dirichlet_row(s, i, 0.0);
  s.finalize();
  const auto r = solve_sparse(s, {});
  EXPECT_NEAR(relative_residual(s.matrix(), s.rhs(), r.u), r.residual, 1e-12);
  EXPECT_LE(r.residual, 1e-10);
}

TEST(Heat, ZeroFixedPoint) {
  auto f = small_heat(0.15);
  f.problem.source = {};
  f.problem.dirichlet = [](const Vec<2>&, double) { return 0.0; };
  const auto r = run_heat_explicit(f.domain, f.storage, f.problem, {1e-4, 50, 10});
  EXPECT_EQ(r.u.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(r.snapshots.size(), 5u);
}

TEST(Heat, DirichletValuesAssignedExactly) {
  auto f = small_heat(0.15);
  const double dt = 1e-4;
  const auto r = run_heat_explicit(f.domain, f.storage, f.problem, {dt, 30, 1});
  ASSERT_EQ(r.snapshots.size(), 30u);
  for (int k = 0; k < 30; ++k)
    for (int i : f.problem.dirichlet_nodes)
      EXPECT_EQ(r.snapshots[k][i], f.problem.dirichlet(f.domain.pos(i), (k + 1) * dt));
}

TEST(Heat, InvalidOptions) {
  auto f = small_heat(0.15);
  EXPECT_THROW(run_heat_explicit(f.domain, f.storage, f.problem, {0.0, 1, 0}), ConfigError);
  EXPECT_THROW(run_heat_explicit(f.domain, f.storage, f.problem, {1e-4, -1, 0}), ConfigError);
  auto missing = f.problem;
  missing.neumann_nodes.clear();
  EXPECT_THROW(run_heat_explicit(f.domain, f.storage, missing, {1e-4, 1, 0}), ConfigError);
}

TEST(Heat, BlowUpReportsStepAndGuideline) {
  auto f = small_heat(0.15);
  try {
    run_heat_explicit(f.domain, f.storage, f.problem, {1.0, 2000, 0});
    FAIL() << "expected an instability error";
  } catch (const NumericalError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("step"), std::string::npos);
    EXPECT_NE(msg.find("h_min^2"), std::string::npos);
  }
}

TEST(Heat, FirstOrderInTime) {
  auto f = small_heat(0.12);
  const double dt = 2e-4, end = 0.04;
  auto run = [&](double step) {
    return run_heat_explicit(f.domain, f.storage, f.problem, {step, static_cast<int>(std::lround(end / step)), 0}).u;
  };
  const VectorXd ref = run(dt / 8), u1 = run(dt), u2 = run(dt / 2);
  const double ratio = (u1 - ref).cwiseAbs().maxCoeff() / (u2 - ref).cwiseAbs().maxCoeff();
  EXPECT_GE(ratio, 1.5);
  EXPECT_LE(ratio, 2.5);
}

TEST(Heat, NeumannStencilsAvoidOtherNeumannNodes) {
  auto f = small_heat(0.1);
  std::vector<char> neumann(f.domain.size(), 0);
  for (int i : f.problem.neumann_nodes) neumann[i] = 1;
  for (int i : f.problem.neumann_nodes) {
    const auto st = f.domain.stencil(i);
    ASSERT_EQ(st.size(), 12u);
    EXPECT_EQ(st[0], i);
    for (std::size_t j = 1; j < st.size(); ++j) EXPECT_FALSE(neumann[st[j]]);
  }
}

TEST(Heat, SteadyStateMatchesImplicit) {
  const auto out = run_heat2d({});
  EXPECT_NEAR(out.domain.size(), 2000, 200);
  EXPECT_LE(out.last_change, 1e-10 * out.dt);
  EXPECT_LE(out.e_inf, 5e-3);
}

TEST(Implicit, ConstantDirichletIsExact) {
  const auto d = (Shape<2>::ball({0, 0}, 1.0)).discretize(constant_spacing<2>(0.1), 2);
  auto dd = d;
  find_closest_stencils(dd, 9);
  ScalarField<2> zero = [](const Vec<2>&) { return 0.0; };
  ScalarField<2> c = [](const Vec<2>&) { return 3.5; };
  const auto r = solve_poisson_implicit<2>(dd, RBFFD<2>{}, zero, c, dd.boundary(), zero, {}, {}, 1);
  ASSERT_TRUE(r.solve.converged);
  EXPECT_LE((r.solve.u.array() - 3.5).abs().maxCoeff(), 1e-8);
}

TEST(Implicit, MissingBoundaryConditionRejected) {
  auto d = (Shape<2>::ball({0, 0}, 1.0)).discretize(constant_spacing<2>(0.2), 2);
  find_closest_stencils(d, 9);
  ScalarField<2> zero = [](const Vec<2>&) { return 0.0; };
  auto bnd = d.boundary();
  bnd.pop_back();
  EXPECT_THROW(solve_poisson_implicit<2>(d, RBFFD<2>{}, zero, zero, bnd, zero, {}, {}, 1), ConfigError);
}

TEST(Implicit, MixedDirichletNeumann1D) {
  // -u'' = 0, u(0) = 1, u'(1) = 2 gives u = 1 + 2x.
  auto d = line(21);
  find_closest_stencils(d, 3);
  ScalarField<1> zero = [](const Vec<1>&) { return 0.0; };
  ScalarField<1> one = [](const Vec<1>&) { return 1.0; };
  ScalarField<1> two = [](const Vec<1>&) { return 2.0; };
  const auto r = solve_poisson_implicit<1>(d, GWLS<1>{}, zero, one, {0}, two, {20}, {}, 1);
  ASSERT_TRUE(r.solve.converged);
  for (int i = 0; i < d.size(); ++i) EXPECT_NEAR(r.solve.u[i], 1.0 + 2.0 * d.pos(i)[0], 1e-8);
}

TEST(Implicit, ConvectionDiffusion3DResidual) {
  ConvDiff3DSetup setup;
  setup.h = 0.12;
  const auto out = run_convdiff3d(setup);
  ASSERT_TRUE(out.result.solve.converged);
  EXPECT_LE(out.result.solve.residual, setup.solver.tol);
  EXPECT_GT(out.result.solve.u.maxCoeff(), 0.0);
}

TEST(Convergence, SlopeOracle) {
  std::vector<double> h{0.1, 0.05, 0.025, 0.0125}, e;
  for (double x : h) e.push_back(3.7 * std::pow(x, 2.3));
  EXPECT_NEAR(fit_slope(h, e), 2.3, 1e-9);
  EXPECT_THROW(fit_slope({0.1}, {1.0}), ConfigError);
  EXPECT_THROW(fit_slope({0.1, 0.1}, {1.0, 2.0}), NumericalError);
}

TEST(Convergence, OrderFromNodeCounts) {
  std::vector<ConvergenceRecord> recs;
  for (int n : {100, 400, 1600}) recs.push_back({n, 0.0, 2.0 / n, {}});
  EXPECT_NEAR(fit_order(recs, 2), 2.0, 1e-9);
}

TEST(Convergence, StudyKeepsMedianAndRequiresGrowth) {
  int calls = 0;
  auto run = [&](double h) {
    ConvergenceRecord r;
    r.h = h;
    r.N = static_cast<int>(1.0 / (h * h));
    r.e_inf = h * h;
    r.timings[Stage::iterative_solve] = ++calls;
    return r;
  };
  const auto recs = convergence_study(run, {0.1, 0.05}, 3);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].timings[Stage::iterative_solve], 2.0);
  EXPECT_EQ(recs[1].timings[Stage::iterative_solve], 5.0);
  EXPECT_THROW(convergence_study(run, {0.05, 0.1}, 1), ConfigError);
  EXPECT_THROW(convergence_study(run, {0.1}, 0), ConfigError);
}

TEST(Convergence, RecordsCsv) {
  std::vector<ConvergenceRecord> recs{{10, 0.5, 0.25, {}}};
  std::ostringstream a, b;
  write_records_csv(a, recs);
  write_records_csv(b, recs, false);
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')),
            "N,h,e_inf,t_domain,t_stencil,t_weights,t_assembly,t_precond,t_solve,t_error");
  EXPECT_EQ(b.str(), "N,h,e_inf\n10,0.5,0.25\n");
}

TEST(Convergence, PoissonAnnulusSecondOrder) {
  PoissonBenchmark<2> bench;
  bench.seed = 4;
  std::vector<ConvergenceRecord> recs;
  for (double h : {0.08, 0.04, 0.02}) recs.push_back(run_poisson_benchmark(bench, h));
  const double q = fit_order(recs, 2);
  EXPECT_GE(q, 1.5);
  EXPECT_LE(q, 2.5);
}

TEST(Convergence, TimingStagesCoverWallTime) {
  PoissonBenchmark<2> bench;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_poisson_benchmark(bench, 0.02);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (double s : r.timings.seconds) EXPECT_GE(s, 0.0);
  EXPECT_NEAR(r.timings.total(), wall, 0.05 * wall);
}

TEST(Convergence, ApproxSetups) {
  const auto setups = standard_approx_setups<2>();
  ASSERT_EQ(setups.size(), 5u);
  const std::vector<double> h{0.1, 0.05, 0.025, 0.0125, 0.00625};
  auto errors = [&](int k) {
    std::vector<double> e;
    for (double x : h) e.push_back(laplacian_grid_error(setups[k], x, 1));
    return e;
  };
  const auto e4 = errors(3);
  EXPECT_GE(fit_slope(h, e4), 1.6);
  EXPECT_LE(fit_slope(h, e4), 2.4);
  const auto e5 = errors(4);
  EXPECT_GE(fit_slope(h, e5), 1.5);
  for (std::size_t i = 1; i < e5.size(); ++i) EXPECT_LT(e5[i], e5[i - 1]);
  const auto e1 = errors(0);
  EXPECT_GE(*std::min_element(e1.begin(), e1.end()), 1e-6);
}
