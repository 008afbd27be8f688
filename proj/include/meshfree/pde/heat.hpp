#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "meshfree/geometry/domain.hpp"
#include "meshfree/operators/shape_storage.hpp"

namespace meshfree {

template <int Dim>
using SpaceTimeField = std::function<double(const Vec<Dim>&, double)>;

/// du/dt = D lap u + s(p, t) with Dirichlet and Neumann boundary parts.
/// Every boundary node must be listed in exactly one of the two node sets.
template <int Dim>
struct HeatProblem {
  ScalarField<Dim> initial;
  SpaceTimeField<Dim> source;  // empty means 0
  SpaceTimeField<Dim> dirichlet;
  std::vector<int> dirichlet_nodes;
  SpaceTimeField<Dim> neumann;
  std::vector<int> neumann_nodes;
  double diffusivity = 1.0;
};

struct HeatOptions {
  double dt = 0.0;
  int steps = 0;
  /// Keep every k-th field (0 keeps none).
  int snapshot_every = 0;
};

struct HeatResult {
  Eigen::VectorXd u;
  std::vector<Eigen::VectorXd> snapshots;
  /// max_i |u^{k+1}_i - u^k_i| of the last step.
  double last_change = 0.0;
};

/// Explicit Euler. Each step updates interior nodes from u^k, then assigns
/// Dirichlet values, then closes Neumann nodes from the neighbours' u^k.
/// Requires Laplacian weights at interior nodes and first derivative
/// weights at Neumann nodes. Throws NumericalError on blow-up, naming the
/// step and the dt <= h_min^2 / (2 d D) guideline.
template <int Dim>
HeatResult run_heat_explicit(const DomainDiscretization<Dim>& domain, const ShapeStorage<Dim>& storage,
                             const HeatProblem<Dim>& problem, const HeatOptions& options);

/// Stencils of `n` nodes for the Neumann nodes, self first, chosen among all
/// nodes except the other Neumann nodes. The explicit closure reads the
/// neighbours from the previous step, so Neumann nodes referencing each other
/// form a lagged boundary iteration that can diverge for any time step.
template <int Dim>
void find_neumann_stencils(DomainDiscretization<Dim>& domain, int n, std::span<const int> neumann_nodes);

/// Smallest distance between two distinct nodes.
template <int Dim>
double min_node_distance(const DomainDiscretization<Dim>& domain);

}  // namespace meshfree
