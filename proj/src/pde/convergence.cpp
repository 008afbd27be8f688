#include "meshfree/pde/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "meshfree/core/errors.hpp"
#include "meshfree/geometry/shape.hpp"
#include "meshfree/geometry/stencil.hpp"
#include "meshfree/operators/explicit.hpp"
#include "meshfree/operators/shape_storage.hpp"
#include "meshfree/pde/implicit_solve.hpp"

namespace meshfree {

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

std::vector<ConvergenceRecord> convergence_study(const std::function<ConvergenceRecord(double)>& run,
                                                 const std::vector<double>& spacings, int repetitions) {
  if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
  std::vector<ConvergenceRecord> records;
  for (double h : spacings) {
    std::vector<ConvergenceRecord> runs;
    for (int r = 0; r < repetitions; ++r) runs.push_back(run(h));
    ConvergenceRecord rec = runs.front();
    for (int s = 0; s < kStageCount; ++s) {
      std::vector<double> times;
      for (const auto& x : runs) times.push_back(x.timings.seconds[s]);
      rec.timings.seconds[s] = median(times);
    }
    if (!records.empty() && rec.N <= records.back().N) {
      throw ConfigError("spacings must give strictly increasing node counts (h = " + std::to_string(h) + ")");
    }
    records.push_back(rec);
  }
  return records;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& error) {
  if (x.size() != error.size() || x.size() < 2) throw ConfigError("slope fit needs at least two points");
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(error[i] > 0.0)) throw NumericalError("slope fit needs positive values");
    const double lx = std::log(x[i]), ly = std::log(error[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (std::abs(den) < 1e-14) throw NumericalError("slope fit needs distinct abscissae");
  return (n * sxy - sx * sy) / den;
}

double fit_order(const std::vector<ConvergenceRecord>& records, int dim) {
  std::vector<double> x, e;
  for (const auto& r : records) {
    x.push_back(std::pow(static_cast<double>(r.N), -1.0 / dim));
    e.push_back(r.e_inf);
  }
  return fit_slope(x, e);
}

void write_records_csv(std::ostream& out, const std::vector<ConvergenceRecord>& records, bool with_timings) {
  out << "N,h,e_inf";
  if (with_timings)
    for (int s = 0; s < kStageCount; ++s) out << ",t_" << stage_name(static_cast<Stage>(s));
  out << '\n';
  const auto old = out.precision(17);
  for (const auto& r : records) {
    out << r.N << ',' << r.h << ',' << r.e_inf;
    if (with_timings)
      for (double t : r.timings.seconds) out << ',' << t;
    out << '\n';
  }
  out.precision(old);
}

template <int Dim>
double manufactured_solution(const Vec<Dim>& p) {
  double u = 1.0;
  for (int k = 0; k < Dim; ++k) u *= std::sin(std::numbers::pi * p[k]);
  return u;
}

template <int Dim>
ConvergenceRecord run_poisson_benchmark(const PoissonBenchmark<Dim>& bench, double h) {
  if (!(h > 0.0)) throw ConfigError("spacing must be positive");
  ConvergenceRecord rec;
  rec.h = h;
  auto& timings = rec.timings;

  DomainDiscretization<Dim> domain;
  {
    StageTimer timer(timings, Stage::domain_discretization);
    const auto shape = Shape<Dim>::ball(Vec<Dim>::Zero(), 1.0) - Shape<Dim>::ball(Vec<Dim>::Zero(), 0.5);
    domain = shape.discretize(constant_spacing<Dim>(h), bench.seed);
  }
  rec.N = domain.size();
  const auto interior = domain.interior();
  {
    StageTimer timer(timings, Stage::stencil_selection);
    const auto all = domain.all();
    find_closest_stencils<Dim>(domain, bench.stencil_size, interior, all);
  }
  ShapeStorage<Dim> storage;
  {
    StageTimer timer(timings, Stage::weight_computation);
    storage = compute_shapes<Dim>(domain, bench.engine, {Family<Dim>::laplacian()}, interior, bench.threads);
  }

  const double pi2 = std::numbers::pi * std::numbers::pi;
  BoundaryValueProblem<Dim> problem;
  problem.op = Combination<Dim>().add(-1.0, Family<Dim>::laplacian());
  problem.rhs = [pi2](const Vec<Dim>& p) { return Dim * pi2 * manufactured_solution<Dim>(p); };
  problem.dirichlet = manufactured_solution<Dim>;
  problem.dirichlet_nodes = domain.boundary();
  const auto result = solve_implicit(domain, storage, problem, bench.solver);
  if (!result.solve.converged) {
    throw NumericalError("Poisson benchmark solve did not converge at h = " + std::to_string(h) +
                         " (residual " + std::to_string(result.solve.residual) + ")");
  }
  for (Stage s : {Stage::matrix_assembly, Stage::preconditioner, Stage::iterative_solve})
    timings[s] = result.timings[s];

  {
    StageTimer timer(timings, Stage::error_computation);
    double e = 0.0;
    for (int i = 0; i < domain.size(); ++i)
      e = std::max(e, std::abs(result.solve.u[i] - manufactured_solution<Dim>(domain.pos(i))));
    rec.e_inf = e;
  }
  return rec;
}

template <int Dim>
std::vector<ApproxSetup<Dim>> standard_approx_setups() {
  std::vector<ApproxSetup<Dim>> out;
  out.push_back({"gaussian_scaled_lu", RBFFD<Dim>{Gaussian{100.0}, -1, Scale::nearest_neighbor, DenseSolver::lu},
                 9});
  out.push_back({"gaussian_lu", RBFFD<Dim>{Gaussian{5.0}, -1, Scale::none, DenseSolver::lu}, 9});
  out.push_back({"gaussian_svd", RBFFD<Dim>{Gaussian{5.0}, -1, Scale::none, DenseSolver::svd}, 9});
  out.push_back({"wls_fpm",
                 GWLS<Dim>{Monomials<Dim>::without_mixed(2), GaussianWeight{1.0}, Scale::nearest_neighbor,
                           DenseSolver::svd},
                 9});
  out.push_back({"phs5_aug2", RBFFD<Dim>{Polyharmonic{5}, 2, Scale::support_radius, DenseSolver::qr}, 12});
  return out;
}

template <int Dim>
double laplacian_grid_error(const ApproxSetup<Dim>& setup, double h, int threads) {
  const int m = static_cast<int>(std::lround(1.0 / h));
  if (m < 2) throw ConfigError("grid spacing too large");
  DomainDiscretization<Dim> domain;
  std::vector<int> inner;
  std::array<int, Dim> idx{};
  while (true) {
    Vec<Dim> p;
    bool edge = false;
    for (int k = 0; k < Dim; ++k) {
      p[k] = static_cast<double>(idx[k]) / m;
      edge = edge || idx[k] == 0 || idx[k] == m;
    }
    const int i = domain.add_internal_node(p);
    if (!edge) inner.push_back(i);
    int k = 0;
    while (k < Dim && ++idx[k] > m) idx[k++] = 0;
    if (k == Dim) break;
  }
  const auto all = domain.all();
  find_closest_stencils<Dim>(domain, setup.stencil_size, inner, all);
  const auto storage = compute_shapes<Dim>(domain, setup.engine, {Family<Dim>::laplacian()}, inner, threads);
  Eigen::VectorXd u(domain.size());
  for (int i = 0; i < domain.size(); ++i) u[i] = manufactured_solution<Dim>(domain.pos(i));
  const ExplicitOperators<Dim> op(storage);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  double e = 0.0;
  for (int i : inner) e = std::max(e, std::abs(op.lap(u, i) + Dim * pi2 * u[i]));
  return e;
}

#define MESHFREE_INSTANTIATE(D)                                                                 \
  template double manufactured_solution<D>(const Vec<D>&);                                      \
  template ConvergenceRecord run_poisson_benchmark<D>(const PoissonBenchmark<D>&, double);      \
  template std::vector<ApproxSetup<D>> standard_approx_setups<D>();                             \
  template double laplacian_grid_error<D>(const ApproxSetup<D>&, double, int);
MESHFREE_INSTANTIATE(1)
MESHFREE_INSTANTIATE(2)
MESHFREE_INSTANTIATE(3)
#undef MESHFREE_INSTANTIATE

}  // namespace meshfree
