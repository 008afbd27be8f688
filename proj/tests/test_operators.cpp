#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "meshfree/core/errors.hpp"
#include "meshfree/core/random.hpp"
#include "meshfree/geometry/shape.hpp"
#include "meshfree/geometry/stencil.hpp"
#include "meshfree/operators/explicit.hpp"
#include "meshfree/operators/implicit.hpp"

using namespace meshfree;
using Eigen::VectorXd;

namespace {

RBFFD<2> phs5() { return RBFFD<2>{Polyharmonic{5}, 2, Scale::support_radius, DenseSolver::qr}; }

DomainDiscretization<2> disk(double h, int n) {
  auto d = (Shape<2>::ball({0, 0}, 1.0)).discretize(constant_spacing<2>(h), 3);
  find_closest_stencils(d, n);
  return d;
}

template <class F>
VectorXd sample(const DomainDiscretization<2>& d, F f) {
  VectorXd u(d.size());
  for (int i = 0; i < d.size(); ++i) u[i] = f(d.pos(i));
  return u;
}

class Biharmonic2D : public CustomOperator<2> {
 public:
  std::string name() const override { return "biharmonic"; }
  int order() const override { return 4; }
  double apply_monomial(const MultiIndex<2>& e, const Vec<2>& x) const override {
    return Monomials<2>::partial(e, {4, 0}, x) + 2 * Monomials<2>::partial(e, {2, 2}, x) +
           Monomials<2>::partial(e, {0, 4}, x);
  }
  double apply_rbf(const Rbf& rbf, const Vec<2>& y) const override {
    const int k = std::get<Polyharmonic>(rbf).k;
    return k * k * (k - 2) * (k - 2) * std::pow(y.norm(), k - 4);
  }
};

}  // namespace

TEST(ComputeShapes, TableShape) {
  DomainDiscretization<2> d;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) d.add_internal_node({0.1 * i + 0.003 * j, 0.1 * j});
  find_closest_stencils(d, 9);
  const auto fams = laplacian_and_gradient<2>();
  const auto s = compute_shapes<2>(d, RBFFD<2>{Polyharmonic{3}, 1, Scale::support_radius, DenseSolver::qr}, fams);
  ASSERT_EQ(s.families().size(), 3u);
  int total = 0;
  for (int i = 0; i < d.size(); ++i) {
    for (const auto& f : fams) EXPECT_EQ(s.weights(f, i).size(), 9u);
    total += s.stencil_size(i);
  }
  EXPECT_EQ(total, 900);
  EXPECT_THROW((void)s.weights(Family<2>::derivative(0, 1), 0), Error);
  EXPECT_THROW((void)s.weights(Family<2>::identity(), 0), Error);
}

TEST(ComputeShapes, CollocationIdentity) {
  auto d = disk(0.2, 7);
  const auto s = compute_shapes<2>(d, RBFFD<2>{Gaussian{1.0}, -1, Scale::nearest_neighbor, DenseSolver::lu},
                                   {Family<2>::identity()});
  for (int i = 0; i < d.size(); ++i) {
    const auto w = s.weights(Family<2>::identity(), i);
    EXPECT_NEAR(w[0], 1.0, 1e-12);
    for (std::size_t j = 1; j < w.size(); ++j) EXPECT_NEAR(w[j], 0.0, 1e-12);
  }
}

TEST(ComputeShapes, ThreadCountInvariant) {
  auto d = disk(0.04, 12);
  const auto fams = all_standard_families<2>();
  const auto a = compute_shapes<2>(d, phs5(), fams, 1);
  const auto b = compute_shapes<2>(d, phs5(), fams, 8);
  for (const auto& f : fams)
    for (int i = 0; i < d.size(); ++i) {
      const auto wa = a.weights(f, i), wb = b.weights(f, i);
      ASSERT_TRUE(std::equal(wa.begin(), wa.end(), wb.begin()));
    }
}

TEST(ComputeShapes, SubsetAndErrors) {
  auto d = disk(0.2, 12);
  const auto interior = d.interior();
  const auto s = compute_shapes<2>(d, phs5(), {Family<2>::laplacian()}, interior);
  for (int i : d.boundary()) EXPECT_FALSE(s.computed(i));
  DomainDiscretization<2> bare = d;
  bare.clear_stencils();
  EXPECT_THROW(compute_shapes<2>(bare, phs5(), {Family<2>::laplacian()}), Error);
  // Stencils too small for degree-2 augmentation.
  find_closest_stencils(bare, 4);
  try {
    compute_shapes<2>(bare, phs5(), {Family<2>::laplacian()}, 4);
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("node 0"), std::string::npos);
  }
}

TEST(ComputeShapes, ThreadEnvironment) {
  EXPECT_EQ(resolve_thread_count(3), 3);
  setenv("MESHFREE_THREADS", "5", 1);
  EXPECT_EQ(resolve_thread_count(), 5);
  setenv("MESHFREE_THREADS", "0", 1);
  EXPECT_GE(resolve_thread_count(), 1);
  setenv("MESHFREE_THREADS", "x", 1);
  EXPECT_THROW(resolve_thread_count(), ConfigError);
  unsetenv("MESHFREE_THREADS");
}

TEST(Explicit, ScalarOperators) {
  auto d = disk(0.1, 15);
  const auto s = compute_shapes<2>(d, phs5(), all_standard_families<2>());
  const ExplicitOperators<2> op(s);
  const VectorXd quad = sample(d, [](const Vec<2>& p) { return p.squaredNorm(); });
  const VectorXd seven = VectorXd::Constant(d.size(), 7.0);
  const VectorXd wavy = sample(d, [](const Vec<2>& p) { return std::sin(3 * p[0]) * p[1]; });
  for (int i : d.interior()) {
    EXPECT_NEAR(op.lap(quad, i), 4.0, 1e-8);
    EXPECT_NEAR(op.lap(seven, i), 0.0, 1e-8);
    EXPECT_EQ(op.directional(wavy, Vec<2>(1, 0), i), op.d1(wavy, 0, i));
    EXPECT_NEAR(op.grad(quad, i)[1], 2 * d.pos(i)[1], 1e-8);
    EXPECT_NEAR(op.d2(quad, 1, 0, i), 0.0, 1e-8);
  }
  EXPECT_THROW(op.lap(VectorXd::Zero(3), 0), Error);
}

TEST(Explicit, VectorOperators) {
  auto d = disk(0.1, 15);
  const auto s = compute_shapes<2>(d, phs5(), all_standard_families<2>());
  const ExplicitOperators<2> op(s);
  Mat<2> a;
  a << 1.5, -2.0, 0.25, 3.0;
  std::vector<Vec<2>> linear, constant, quad;
  for (int i = 0; i < d.size(); ++i) {
    linear.push_back(a * d.pos(i));
    constant.emplace_back(2.0, -1.0);
    quad.emplace_back(d.pos(i)[0] * d.pos(i)[0], d.pos(i)[1] * d.pos(i)[1]);
  }
  for (int i : d.interior()) {
    EXPECT_NEAR(op.div(linear, i), a.trace(), 1e-8);
    EXPECT_LE((op.grad(linear, i) - a).norm(), 1e-8);
    EXPECT_LE(op.grad(constant, i).norm(), 1e-8);
    EXPECT_LE((op.graddiv(quad, i) - Vec<2>(2, 2)).norm(), 1e-7);
    EXPECT_LE((op.lap(quad, i) - Vec<2>(2, 2)).norm(), 1e-7);
  }
}

TEST(Explicit, Neumann1D) {
  DomainDiscretization<1> d;
  d.add_boundary_node(Vec<1>(1.0), -1, Vec<1>(1.0));
  d.add_internal_node(Vec<1>(0.9));
  d.add_internal_node(Vec<1>(0.8));
  find_closest_stencils(d, 3);
  const RBFFD<1> engine{Polyharmonic{3}, 1, Scale::none, DenseSolver::qr};
  const auto s = compute_shapes<1>(d, engine, {Family<1>::derivative(0)});
  const ExplicitOperators<1> op(s);
  VectorXd u(3);
  u << 123.0, 0.9, 0.8;
  EXPECT_NEAR(op.neumann(u, 0, Vec<1>(1.0), 1.0), 1.0, 1e-9);
  VectorXd c(3);
  c << -4.0, 2.5, 2.5;
  EXPECT_NEAR(op.neumann(c, 0, Vec<1>(1.0), 0.0), 2.5, 1e-9);
  u[0] = op.neumann(u, 0, Vec<1>(1.0), 0.3);
  EXPECT_NEAR(op.directional(u, Vec<1>(1.0), 0), 0.3, 1e-10);
}

TEST(Explicit, NeumannIllPosed) {
  // Symmetric stencil: the central first-derivative weight is zero.
  DomainDiscretization<1> d;
  d.add_boundary_node(Vec<1>(0.0), -1, Vec<1>(1.0));
  d.add_internal_node(Vec<1>(-0.1));
  d.add_internal_node(Vec<1>(0.1));
  find_closest_stencils(d, 3);
  const auto s = compute_shapes<1>(d, GWLS<1>{Monomials<1>(2), ConstantWeight{}, Scale::none, DenseSolver::qr},
                                   {Family<1>::derivative(0)});
  EXPECT_THROW(ExplicitOperators<1>(s).neumann(VectorXd::Ones(3), 0, Vec<1>(1.0), 0.0), NumericalError);
}

TEST(Implicit, RowsMatchExplicit) {
  auto d = disk(0.08, 12);
  const auto s = compute_shapes<2>(d, phs5(), laplacian_and_gradient<2>());
  SparseSystem sys(d.size());
  ImplicitOperators<2> imp(s, sys);
  const ExplicitOperators<2> ex(s);
  for (int i : d.interior()) imp.equation(i, Family<2>::laplacian(), 2.5 * i);
  for (int i : d.boundary()) imp.dirichlet(i, 1.0);
  sys.finalize();
  Rng rng(1);
  for (int trial = 0; trial < 5; ++trial) {
    VectorXd u(d.size());
    for (int i = 0; i < d.size(); ++i) u[i] = rng.normal();
    const VectorXd mu = sys.multiply(u);
    for (int i : d.interior()) {
      ASSERT_EQ(mu[i], ex.lap(u, i));
      EXPECT_EQ(sys.rhs()[i], 2.5 * i);
    }
    const VectorXd eig = sys.matrix() * u;
    EXPECT_LE((eig - mu).norm(), 1e-10 * mu.norm());
  }
}

TEST(Implicit, CombinationRow) {
  auto d = disk(0.08, 12);
  const auto s = compute_shapes<2>(d, phs5(), laplacian_and_gradient<2>());
  const auto op = -2.0 * Combination<2>(Family<2>::laplacian()) + 8.0 * Combination<2>::directional(Vec<2>(2, 1));
  SparseSystem sys(d.size());
  const int i = d.interior().front();
  assemble_interior_row(sys, s, i, op, 1.0);
  const VectorXd u = sample(d, [](const Vec<2>& p) { return p[0] * p[0] - p[0] * p[1] + 3 * p[1]; });
  // -2 (2) + 8 (2 (2x - y) + (-x + 3))
  const Vec<2> p = d.pos(i);
  const double exact = -4.0 + 8.0 * (2 * (2 * p[0] - p[1]) + (-p[0] + 3));
  EXPECT_NEAR(sys.row_dot(i, u), exact, 1e-8);
  EXPECT_NEAR(sys.row_dot(i, u), ExplicitOperators<2>(s).apply(op, u, i), 1e-10);
  EXPECT_EQ(sys.row_nnz(i), s.stencil_size(i));
}

TEST(Implicit, DirichletAndNeumannRows) {
  auto d = disk(0.1, 12);
  const auto s = compute_shapes<2>(d, phs5(), laplacian_and_gradient<2>());
  SparseSystem sys(d.size());
  const int b = d.boundary().front();
  const int b2 = d.boundary().back();
  assemble_dirichlet_row(sys, b, 3.5);
  EXPECT_EQ(sys.row_nnz(b), 1);
  EXPECT_EQ(sys.rhs()[b], 3.5);
  EXPECT_THROW(assemble_dirichlet_row(sys, d.size(), 0.0), Error);
  const Vec<2> n = d.normal(b2);
  assemble_neumann_row(sys, s, b2, n, 1.0);
  EXPECT_EQ(sys.row_nnz(b2), s.stencil_size(b2));
  const VectorXd lin = sample(d, [&](const Vec<2>& p) { return n.dot(p); });
  EXPECT_NEAR(sys.row_dot(b2, lin), 1.0, 1e-9);
  EXPECT_NEAR(sys.row_dot(b2, VectorXd::Constant(d.size(), 4.0)), 0.0, 1e-9);
}

TEST(Implicit, Guards) {
  auto d = disk(0.1, 12);
  const auto s = compute_shapes<2>(d, phs5(), laplacian_and_gradient<2>());
  SparseSystem sys(d.size());
  const int i = d.interior().front();
  const int k = d.interior().back();
  assemble_interior_row(sys, s, i, Family<2>::laplacian(), 0.0);
  EXPECT_THROW(assemble_dirichlet_row(sys, i, 0.0), GuardError);
  EXPECT_THROW(assemble_neumann_row(sys, s, i, Vec<2>(1, 0), 0.0), GuardError);
  assemble_dirichlet_row(sys, k, 0.0);
  EXPECT_THROW(assemble_dirichlet_row(sys, k, 0.0), GuardError);
#if MESHFREE_CHECKS
  EXPECT_THROW(assemble_interior_row(sys, s, i, Family<2>::laplacian(), 0.0, k), GuardError);
  const int g = d.boundary().front();
  sys.assign_row(g, i);
  EXPECT_NO_THROW(assemble_interior_row(sys, s, i, Family<2>::derivative(0), 0.0, g));
#endif
  EXPECT_THROW(assemble_interior_row(sys, s, i, Family<2>::identity(), 0.0), Error);
  EXPECT_THROW(sys.finalize(), GuardError);
}

TEST(Operators, CustomOperatorFlows) {
  DomainDiscretization<2> d;
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) d.add_internal_node({0.1 * i + 0.01 * std::sin(j), 0.1 * j + 0.01 * std::cos(i)});
  find_closest_stencils(d, 30);
  const auto bih = Family<2>::custom(std::make_shared<Biharmonic2D>());
  const auto s = compute_shapes<2>(d, RBFFD<2>{Polyharmonic{7}, 4, Scale::support_radius, DenseSolver::qr}, {bih});
  const VectorXd u = sample(d, [](const Vec<2>& p) { return p[0] * p[0] * p[1] * p[1] + std::pow(p[0], 4); });
  const int c = 40;
  EXPECT_NEAR(ExplicitOperators<2>(s).apply(bih, u, c), 32.0, 1e-5);
  SparseSystem sys(d.size());
  assemble_interior_row(sys, s, c, bih, 0.0);
  EXPECT_EQ(sys.row_dot(c, u), ExplicitOperators<2>(s).apply(bih, u, c));
  EXPECT_EQ(bih.label(), "custom:biharmonic");
}

TEST(Operators, StorageCsv) {
  DomainDiscretization<1> d;
  for (int i = 0; i < 4; ++i) d.add_internal_node(Vec<1>(0.5 * i));
  find_closest_stencils(d, 3);
  const auto s = compute_shapes<1>(d, RBFFD<1>{Polyharmonic{3}, 1, Scale::none, DenseSolver::qr},
                                   {Family<1>::derivative(0), Family<1>::laplacian()});
  std::ostringstream out;
  s.write_csv(out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "node,family,offset,weight");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4 * 2 * 3);
  EXPECT_NE(out.str().find("\n0,d_0,0,"), std::string::npos);
}
