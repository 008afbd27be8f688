#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "meshfree/approx/engine.hpp"
#include "meshfree/pde/solver.hpp"
#include "meshfree/pde/timing.hpp"

namespace meshfree {

struct ConvergenceRecord {
  int N = 0;
  double h = 0.0;
  double e_inf = 0.0;
  TimingBreakdown timings;
};

/// Runs `run(h)` for every spacing `repetitions` times, keeps the error of
/// the first run and the per-stage median time. Records must come out with
/// strictly increasing N.
std::vector<ConvergenceRecord> convergence_study(const std::function<ConvergenceRecord(double)>& run,
                                                 const std::vector<double>& spacings, int repetitions);

/// Least squares slope of log(error) against log(x).
double fit_slope(const std::vector<double>& x, const std::vector<double>& error);

/// Order q in e ~ N^(-q/d), i.e. the slope of log e against log N^(-1/d).
double fit_order(const std::vector<ConvergenceRecord>& records, int dim);

/// `N,h,e_inf,t_domain,...,t_error`; with_timings = false keeps the first
/// three columns only.
void write_records_csv(std::ostream& out, const std::vector<ConvergenceRecord>& records, bool with_timings = true);

/// Manufactured Poisson problem -lap u = f on B(0,1) \ B(0,1/2), u = u0 on
/// the boundary, u0 = prod sin(pi x_i).
template <int Dim>
struct PoissonBenchmark {
  ApproxEngine<Dim> engine = RBFFD<Dim>{Polyharmonic{3}, 2, Scale::support_radius, DenseSolver::qr};
  int stencil_size = Dim == 2 ? 9 : 35;
  SparseSolverConfig solver;
  std::uint64_t seed = 0;
  int threads = 0;
};

template <int Dim>
double manufactured_solution(const Vec<Dim>& p);

/// One timed run at spacing h.
template <int Dim>
ConvergenceRecord run_poisson_benchmark(const PoissonBenchmark<Dim>& bench, double h);

/// One approximation setup for the Laplacian accuracy study.
template <int Dim>
struct ApproxSetup {
  std::string name;
  ApproxEngine<Dim> engine;
  int stencil_size;
};

/// The five setups: Gaussian RBF-FD scaled to the nearest node (LU), the
/// same unscaled with sigma 5 (LU and SVD), weighted least squares on
/// 1, x_k, x_k^2 (FPM-like) and PHS r^5 with degree-2 augmentation.
template <int Dim>
std::vector<ApproxSetup<Dim>> standard_approx_setups();

/// max |w^T u - lap u| over grid nodes of [0,1]^d with spacing h that are not
/// on the boundary of the square; u = prod sin(pi x_i).
template <int Dim>
double laplacian_grid_error(const ApproxSetup<Dim>& setup, double h, int threads = 0);

}  // namespace meshfree
