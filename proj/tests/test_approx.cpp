#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "meshfree/approx/engine.hpp"
#include "meshfree/core/errors.hpp"
#include "meshfree/core/random.hpp"

using namespace meshfree;
using Eigen::VectorXd;

namespace {

std::vector<Vec<2>> cross(double h) { return {{0, 0}, {h, 0}, {-h, 0}, {0, h}, {0, -h}}; }

double rel_err(const VectorXd& a, const VectorXd& b) { return (a - b).norm() / b.norm(); }

template <int Dim>
std::vector<Vec<Dim>> random_stencil(Rng& rng, int n, Vec<Dim>& center) {
  std::vector<Vec<Dim>> pts;
  for (int a = 0; a < Dim; ++a) center[a] = rng.uniform(-3, 3);
  pts.push_back(center);
  while (static_cast<int>(pts.size()) < n) {
    Vec<Dim> p;
    for (int a = 0; a < Dim; ++a) p[a] = center[a] + rng.uniform(-0.1, 0.1);
    pts.push_back(p);
  }
  return pts;
}

template <int Dim>
std::vector<Operator<Dim>> test_operators() {
  std::vector<Operator<Dim>> ops{Operator<Dim>::identity(), Operator<Dim>::laplacian()};
  for (int a = 0; a < Dim; ++a) {
    ops.push_back(Operator<Dim>::derivative(a));
    for (int b = a; b < Dim; ++b) ops.push_back(Operator<Dim>::derivative(a, b));
  }
  return ops;
}

/// Biharmonic for polyharmonic splines and monomials, as a user extension.
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

TEST(Monomials, GradedLexOrder) {
  const Monomials<2> m(2);
  ASSERT_EQ(m.size(), 6);
  const std::vector<MultiIndex<2>> expect{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  EXPECT_EQ(m.all_exponents(), expect);
  const auto pure = Monomials<2>::without_mixed(2);
  const std::vector<MultiIndex<2>> expect_pure{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {0, 2}};
  EXPECT_EQ(pure.all_exponents(), expect_pure);
  for (int d = 0; d <= 5; ++d) {
    EXPECT_EQ(Monomials<1>(d).size(), monomial_count(d, 1));
    EXPECT_EQ(Monomials<2>(d).size(), monomial_count(d, 2));
    EXPECT_EQ(Monomials<3>(d).size(), monomial_count(d, 3));
  }
  EXPECT_EQ(monomial_count(2, 3), 10);
  EXPECT_EQ(Monomials<3>(-1).size(), 0);
}

TEST(Monomials, Partials) {
  const Vec<2> x(2.0, 3.0);
  EXPECT_DOUBLE_EQ(Monomials<2>::partial({3, 2}, {0, 0}, x), 8.0 * 9.0);
  EXPECT_DOUBLE_EQ(Monomials<2>::partial({3, 2}, {1, 1}, x), 3 * 4.0 * 2 * 3.0);
  EXPECT_DOUBLE_EQ(Monomials<2>::partial({3, 2}, {0, 3}, x), 0.0);
}

TEST(ApplyOperator, ClosedForms) {
  const auto lap = Operator<2>::laplacian();
  EXPECT_DOUBLE_EQ(apply_operator_to_basis<2>(lap, MultiIndex<2>{2, 0}, Vec<2>(0.3, -7.0)), 2.0);
  EXPECT_NEAR(apply_operator_to_basis<2>(lap, Rbf{Polyharmonic{3}}, Vec<2>(2.0, 0.0)), 18.0, 1e-12);
  EXPECT_NEAR(apply_operator_to_basis<2>(lap, Rbf{Polyharmonic{3}}, Vec<2>(1.2, 1.6)), 18.0, 1e-12);
  EXPECT_DOUBLE_EQ(apply_operator_to_basis<2>(Operator<2>::identity(), Rbf{Gaussian{0.7}}, Vec<2>::Zero()), 1.0);
  EXPECT_DOUBLE_EQ(apply_operator_to_basis<2>(Operator<2>::identity(), Rbf{Polyharmonic{4}}, Vec<2>::Zero()), 0.0);
}

TEST(ApplyOperator, SingularAtOrigin) {
  const Vec<2> o = Vec<2>::Zero();
  EXPECT_THROW(apply_operator_to_basis<2>(Operator<2>::derivative(0, 0), Rbf{Polyharmonic{1}}, o), NumericalError);
  EXPECT_THROW(apply_operator_to_basis<2>(Operator<2>::laplacian(), Rbf{Polyharmonic{2}}, o), NumericalError);
  EXPECT_THROW(apply_operator_to_basis<2>(Operator<2>::derivative(1), Rbf{Polyharmonic{1}}, o), NumericalError);
  EXPECT_DOUBLE_EQ(apply_operator_to_basis<2>(Operator<2>::laplacian(), Rbf{Polyharmonic{3}}, o), 0.0);
  EXPECT_DOUBLE_EQ(apply_operator_to_basis<2>(Operator<2>::derivative(0), Rbf{Polyharmonic{2}}, o), 0.0);
  EXPECT_DOUBLE_EQ(apply_operator_to_basis<2>(Operator<2>::laplacian(), Rbf{Gaussian{2.0}}, o), -2 * 2.0 / 4.0);
}

class RadialDerivatives : public ::testing::TestWithParam<int> {};

// Central finite differences of rbf_value as an independent oracle.
TEST_P(RadialDerivatives, MatchFiniteDifferences) {
  const std::vector<Rbf> rbfs{Gaussian{0.8},     Multiquadric{1.3}, InverseMultiquadric{0.6},
                              Polyharmonic{3},   Polyharmonic{4},   Polyharmonic{5},
                              Polyharmonic{2},   Polyharmonic{7}};
  const Rbf rbf = rbfs[GetParam()];
  auto f = [&](const Vec<3>& y) { return rbf_value(rbf, y.norm()); };
  const Vec<3> y(0.37, -0.52, 0.81);
  const double eps = 1e-4;
  for (int a = 0; a < 3; ++a) {
    const Vec<3> ea = eps * Vec<3>::Unit(a);
    const double fd1 = (f(y + ea) - f(y - ea)) / (2 * eps);
    EXPECT_NEAR(apply_operator_to_basis<3>(Operator<3>::derivative(a), rbf, y), fd1, 1e-7 * (1 + std::abs(fd1)));
    for (int b = 0; b < 3; ++b) {
      const Vec<3> eb = eps * Vec<3>::Unit(b);
      const double fd2 = (f(y + ea + eb) - f(y + ea - eb) - f(y - ea + eb) + f(y - ea - eb)) / (4 * eps * eps);
      EXPECT_NEAR(apply_operator_to_basis<3>(Operator<3>::derivative(a, b), rbf, y), fd2, 1e-5 * (1 + std::abs(fd2)));
    }
  }
  double lap = 0;
  for (int a = 0; a < 3; ++a) lap += apply_operator_to_basis<3>(Operator<3>::derivative(a, a), rbf, y);
  EXPECT_NEAR(apply_operator_to_basis<3>(Operator<3>::laplacian(), rbf, y), lap, 1e-10);
}

INSTANTIATE_TEST_SUITE_P(AllKinds, RadialDerivatives, ::testing::Range(0, 8));

TEST(Gwls, FivePointCross) {
  for (double h : {1.0, 0.1, 0.01}) {
    const auto pts = cross(h);
    VectorXd expect(5);
    expect << -4, 1, 1, 1, 1;
    expect /= h * h;
    for (auto solver : {DenseSolver::lu, DenseSolver::qr, DenseSolver::svd}) {
      for (auto scale : {Scale::none, Scale::nearest_neighbor, Scale::support_radius}) {
        GWLS<2> g{Monomials<2>::without_mixed(2), ConstantWeight{}, scale, solver};
        const VectorXd w = gwls_weights<2>(g, pts, pts[0], Operator<2>::laplacian());
        EXPECT_LE(rel_err(w, expect), 1e-9) << h;
      }
    }
  }
}

TEST(Gwls, IdentityCollocation) {
  const std::vector<Vec<2>> pts{{0.1, 0.2}, {0.3, 0.2}, {0.1, 0.5}, {0.35, 0.45}, {-0.1, 0.1}, {0.2, -0.1}};
  GWLS<2> g{Monomials<2>(2), ConstantWeight{}, Scale::support_radius, DenseSolver::lu};
  const VectorXd w = gwls_weights<2>(g, pts, pts[0], Operator<2>::identity());
  EXPECT_NEAR(w[0], 1.0, 1e-12);
  EXPECT_LE(w.tail(5).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Gwls, CentralDifference1D) {
  const double h = 0.1;
  const std::vector<Vec<1>> pts{Vec<1>(0.0), Vec<1>(-h), Vec<1>(h)};
  GWLS<1> g{Monomials<1>(2), ConstantWeight{}, Scale::none, DenseSolver::qr};
  const VectorXd w = gwls_weights<1>(g, pts, pts[0], Operator<1>::derivative(0));
  EXPECT_NEAR(w[0], 0.0, 1e-12);
  EXPECT_NEAR(w[1], -5.0, 1e-12);
  EXPECT_NEAR(w[2], 5.0, 1e-12);
}

TEST(Gwls, Errors) {
  const auto pts = cross(0.1);
  GWLS<2> too_big{Monomials<2>(3), ConstantWeight{}, Scale::none, DenseSolver::qr};
  EXPECT_THROW(gwls_weights<2>(too_big, pts, pts[0], Operator<2>::laplacian()), NumericalError);
  const std::vector<Vec<2>> more{{0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 1}, {1, 3}, {2, 2}};
  GWLS<2> lu_rect{Monomials<2>(2), ConstantWeight{}, Scale::none, DenseSolver::lu};
  EXPECT_THROW(gwls_weights<2>(lu_rect, more, more[0], Operator<2>::laplacian()), ConfigError);
  // Points on a line: the basis 1, x, y is rank deficient.
  const std::vector<Vec<2>> line{{0, 0}, {1, 1}, {2, 2}};
  GWLS<2> lu_line{Monomials<2>(1), ConstantWeight{}, Scale::none, DenseSolver::lu};
  EXPECT_THROW(gwls_weights<2>(lu_line, line, line[0], Operator<2>::derivative(0)), NumericalError);
  GWLS<2> svd_line{Monomials<2>(1), ConstantWeight{}, Scale::none, DenseSolver::svd};
  EXPECT_NO_THROW(gwls_weights<2>(svd_line, line, line[0], Operator<2>::derivative(0)));
}

TEST(Gwls, SpanExactness) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    Vec<2> c;
    const auto pts = random_stencil<2>(rng, 12, c);
    GWLS<2> g{Monomials<2>(2), GaussianWeight{1.0}, Scale::support_radius, DenseSolver::qr};
    // u = 1 + 2x - y + 0.5 x^2 + 3xy - y^2 lies in span(b)
    auto u = [](const Vec<2>& p) { return 1 + 2 * p[0] - p[1] + 0.5 * p[0] * p[0] + 3 * p[0] * p[1] - p[1] * p[1]; };
    VectorXd vals(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = u(pts[i]);
    const LocalApproximation<2> local(g, pts, c);
    const double lap = local.weights(Operator<2>::laplacian()).dot(vals);
    EXPECT_NEAR(lap, -1.0, 1e-9);
    const double dx = local.weights(Operator<2>::derivative(0)).dot(vals);
    EXPECT_NEAR(dx, 2 + c[0] + 3 * c[1], 1e-9 * (1 + std::abs(2 + c[0] + 3 * c[1])));
  }
}

TEST(Gwls, RbfBasis) {
  const auto pts = cross(0.1);
  GWLS<2> g{Rbf{Gaussian{2.0}}, ConstantWeight{}, Scale::nearest_neighbor, DenseSolver::lu};
  const VectorXd w = gwls_weights<2>(g, pts, pts[0], Operator<2>::laplacian());
  EXPECT_NEAR(w[1], w[2], 1e-9 * w.norm());
  EXPECT_NEAR(w[1], w[3], 1e-9 * w.norm());
}

TEST(Rbffd, ConstantAnnihilation) {
  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    Vec<2> c;
    const auto pts = random_stencil<2>(rng, 12, c);
    RBFFD<2> r{Polyharmonic{5}, 0, Scale::support_radius, DenseSolver::qr};
    const VectorXd w = rbffd_weights<2>(r, pts, c, Operator<2>::laplacian());
    EXPECT_LE(std::abs(w.sum()), 1e-9 * w.lpNorm<1>());
  }
}

TEST(Rbffd, CentralDifference1D) {
  const double h = 0.1;
  const std::vector<Vec<1>> pts{Vec<1>(0.0), Vec<1>(-h), Vec<1>(h)};
  for (auto solver : {DenseSolver::lu, DenseSolver::qr, DenseSolver::svd}) {
    RBFFD<1> r{Polyharmonic{3}, 1, Scale::none, solver};
    const VectorXd w = rbffd_weights<1>(r, pts, pts[0], Operator<1>::derivative(0));
    EXPECT_NEAR(w[0], 0.0, 1e-10);
    EXPECT_NEAR(w[1], -5.0, 1e-10);
    EXPECT_NEAR(w[2], 5.0, 1e-10);
  }
}

TEST(Rbffd, ScaleCovariance) {
  Rng rng(8);
  for (auto scale : {Scale::none, Scale::support_radius}) {
    Vec<2> c;
    const auto pts = random_stencil<2>(rng, 12, c);
    std::vector<Vec<2>> doubled;
    for (const auto& p : pts) doubled.push_back(c + 2 * (p - c));
    RBFFD<2> r{Polyharmonic{5}, 2, scale, DenseSolver::qr};
    const VectorXd w1 = rbffd_weights<2>(r, pts, c, Operator<2>::laplacian());
    const VectorXd w2 = rbffd_weights<2>(r, doubled, c, Operator<2>::laplacian());
    EXPECT_LE(rel_err(w2, VectorXd(w1 / 4)), 1e-9);
  }
}

template <int Dim>
void check_monomial_exactness(int seed) {
  Rng rng(seed);
  const Monomials<Dim> probe(2);
  for (int trial = 0; trial < 30; ++trial) {
    Vec<Dim> c;
    const auto pts = random_stencil<Dim>(rng, std::max(12, monomial_count(2, Dim) + 2), c);
    RBFFD<Dim> r{Polyharmonic{5}, 2, Scale::support_radius, DenseSolver::qr};
    const LocalApproximation<Dim> local(r, pts, c);
    for (const auto& op : test_operators<Dim>()) {
      const VectorXd w = local.weights(op);
      for (int k = 0; k < probe.size(); ++k) {
        double approx = 0;
        for (std::size_t i = 0; i < pts.size(); ++i) approx += w[i] * probe.eval(k, pts[i]);
        const double exact = apply_operator_to_basis<Dim>(op, probe.exponents(k), c);
        EXPECT_LE(std::abs(approx - exact), 1e-8 * (1 + std::abs(exact)));
      }
    }
  }
}

TEST(Rbffd, MonomialExactness1D) { check_monomial_exactness<1>(1); }
TEST(Rbffd, MonomialExactness2D) { check_monomial_exactness<2>(2); }
TEST(Rbffd, MonomialExactness3D) { check_monomial_exactness<3>(3); }

TEST(Rbffd, SingularSaddle) {
  // Collinear nodes: x - y vanishes on all of them, so Q loses rank.
  std::vector<Vec<2>> line;
  for (int i = 0; i < 8; ++i) line.emplace_back(0.1 * i, 0.1 * i);
  RBFFD<2> r{Polyharmonic{3}, 1, Scale::none, DenseSolver::qr};
  try {
    rbffd_weights<2>(r, line, line[0], Operator<2>::laplacian());
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("larger stencil"), std::string::npos);
  }
  RBFFD<2> svd{Polyharmonic{3}, 1, Scale::none, DenseSolver::svd};
  EXPECT_NO_THROW(rbffd_weights<2>(svd, line, line[0], Operator<2>::laplacian()));
  RBFFD<2> small{Polyharmonic{3}, 2, Scale::none, DenseSolver::qr};
  EXPECT_THROW(rbffd_weights<2>(small, cross(0.1), Vec<2>::Zero(), Operator<2>::laplacian()), NumericalError);
}

TEST(Engines, Symmetry) {
  const auto pts = cross(0.1);
  RBFFD<2> r{Polyharmonic{3}, 2 - 1, Scale::support_radius, DenseSolver::qr};
  const VectorXd w = rbffd_weights<2>(r, pts, pts[0], Operator<2>::laplacian());
  for (int i = 2; i < 5; ++i) EXPECT_NEAR(w[i], w[1], 1e-12 * w.norm());
  GWLS<2> g{Monomials<2>::without_mixed(2), GaussianWeight{1.0}, Scale::nearest_neighbor, DenseSolver::svd};
  const VectorXd v = gwls_weights<2>(g, pts, pts[0], Operator<2>::laplacian());
  for (int i = 2; i < 5; ++i) EXPECT_NEAR(v[i], v[1], 1e-12 * v.norm());
}

TEST(Engines, SolverAgreement) {
  Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    Vec<2> c;
    const auto pts = random_stencil<2>(rng, 10, c);
    std::vector<VectorXd> ws;
    for (auto solver : {DenseSolver::lu, DenseSolver::qr, DenseSolver::svd}) {
      RBFFD<2> r{Polyharmonic{3}, 1, Scale::support_radius, solver};
      ws.push_back(rbffd_weights<2>(r, pts, c, Operator<2>::laplacian()));
    }
    EXPECT_LE(rel_err(ws[1], ws[0]), 1e-8);
    EXPECT_LE(rel_err(ws[2], ws[0]), 1e-8);
  }
}

TEST(Engines, ShiftInvariance) {
  Rng rng(5);
  Vec<2> c;
  const auto pts = random_stencil<2>(rng, 12, c);
  const Vec<2> shift(0.25, -0.5);
  std::vector<Vec<2>> moved;
  for (const auto& p : pts) moved.push_back(p + shift);
  const std::vector<ApproxEngine<2>> engines{
      RBFFD<2>{Polyharmonic{5}, 2, Scale::support_radius, DenseSolver::qr},
      GWLS<2>{Monomials<2>(2), GaussianWeight{1.0}, Scale::nearest_neighbor, DenseSolver::svd}};
  for (const auto& e : engines) {
    const VectorXd a = compute_weights<2>(e, pts, c, Operator<2>::laplacian());
    const VectorXd b = compute_weights<2>(e, moved, c + shift, Operator<2>::laplacian());
    EXPECT_LE(rel_err(b, a), 1e-12);
  }
}

TEST(Engines, CombinationIsLinear) {
  Rng rng(7);
  Vec<2> c;
  const auto pts = random_stencil<2>(rng, 12, c);
  RBFFD<2> r{Polyharmonic{3}, 2, Scale::support_radius, DenseSolver::qr};
  const LocalApproximation<2> local(r, pts, c);
  const auto op = -2.0 * Operator<2>::laplacian() + 8.0 * Operator<2>::directional(Vec<2>(2, 1));
  const VectorXd combined = local.weights(op);
  const VectorXd parts = -2.0 * local.weights(Operator<2>::laplacian()) + 16.0 * local.weights(Operator<2>::derivative(0)) +
                         8.0 * local.weights(Operator<2>::derivative(1));
  EXPECT_LE(rel_err(combined, parts), 1e-13);
  EXPECT_THROW(Operator<2>::directional(Vec<2>::Zero()), ConfigError);
  EXPECT_THROW(Operator<2>::derivative(2), ConfigError);
}

TEST(Engines, CustomBiharmonic) {
  std::vector<Vec<2>> pts;
  for (int i = -2; i <= 2; ++i)
    for (int j = -2; j <= 2; ++j) pts.emplace_back(0.1 * i + 0.01 * j * j, 0.1 * j);
  RBFFD<2> r{Polyharmonic{7}, 4, Scale::support_radius, DenseSolver::qr};
  const auto op = Operator<2>::custom(std::make_shared<Biharmonic2D>());
  EXPECT_EQ(op.order(), 4);
  const VectorXd w = rbffd_weights<2>(r, pts, pts[12], op);
  // u = x^4 has biharmonic 24; u = x^2 y^2 has 8.
  double a = 0, b = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vec<2> p = pts[i] - pts[12];
    a += w[i] * std::pow(p[0], 4);
    b += w[i] * p[0] * p[0] * p[1] * p[1];
  }
  EXPECT_NEAR(a, 24.0, 1e-6);
  EXPECT_NEAR(b, 8.0, 1e-6);
}
