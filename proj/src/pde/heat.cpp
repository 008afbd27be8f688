#include "meshfree/pde/heat.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "meshfree/core/errors.hpp"
#include "meshfree/geometry/kdtree.hpp"
#include "meshfree/operators/explicit.hpp"
#include "roles.hpp"

namespace meshfree {

template <int Dim>
double min_node_distance(const DomainDiscretization<Dim>& domain) {
  if (domain.size() < 2) return std::numeric_limits<double>::infinity();
  const KDTree<Dim> tree(domain.positions());
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> idx;
  std::vector<double> d2;
  for (int i = 0; i < domain.size(); ++i) {
    tree.knn(domain.pos(i), 2, idx, d2);
    for (double v : d2)
      if (v > 0.0) best = std::min(best, v);
  }
  return std::sqrt(best);
}

template <int Dim>
void find_neumann_stencils(DomainDiscretization<Dim>& domain, int n, std::span<const int> neumann_nodes) {
  if (n < 1) throw ConfigError("stencil size must be positive");
  std::vector<char> is_neumann(domain.size(), 0);
  for (int i : neumann_nodes) {
    if (i < 0 || i >= domain.size()) throw ConfigError("Neumann node " + std::to_string(i) + " out of range");
    is_neumann[i] = 1;
  }
  std::vector<int> ids;
  std::vector<Vec<Dim>> points;
  for (int i = 0; i < domain.size(); ++i) {
    if (is_neumann[i]) continue;
    ids.push_back(i);
    points.push_back(domain.pos(i));
  }
  if (static_cast<int>(ids.size()) < n - 1) {
    throw GeometryError("not enough non-Neumann nodes for stencils of size " + std::to_string(n));
  }
  const KDTree<Dim> tree(std::move(points));
  for (int i : neumann_nodes) {
    std::vector<int> stencil{i};
    if (n > 1)
      for (int local : tree.knn(domain.pos(i), n - 1)) stencil.push_back(ids[local]);
    domain.set_stencil(i, std::move(stencil));
  }
}

template <int Dim>
HeatResult run_heat_explicit(const DomainDiscretization<Dim>& domain, const ShapeStorage<Dim>& storage,
                             const HeatProblem<Dim>& problem, const HeatOptions& options) {
  if (!(options.dt > 0.0) || !std::isfinite(options.dt)) throw ConfigError("time step must be positive");
  if (options.steps < 0) throw ConfigError("number of steps must be nonnegative");
  if (!problem.initial) throw ConfigError("heat problem needs an initial condition");
  if (!problem.dirichlet_nodes.empty() && !problem.dirichlet) throw ConfigError("Dirichlet data missing");
  if (!problem.neumann_nodes.empty() && !problem.neumann) throw ConfigError("Neumann data missing");
  if (storage.size() != domain.size()) throw ConfigError("weights were computed on a different domain");

  const auto roles = detail::classify_nodes(domain, problem.dirichlet_nodes, problem.neumann_nodes);
  std::vector<int> interior;
  for (int i = 0; i < domain.size(); ++i)
    if (roles[i] == detail::Role::interior) interior.push_back(i);

  const ExplicitOperators<Dim> op(storage);
  const double dt = options.dt;
  const double diffusivity = problem.diffusivity;

  HeatResult result;
  Eigen::VectorXd u(domain.size());
  for (int i = 0; i < domain.size(); ++i) u[i] = problem.initial(domain.pos(i));
  Eigen::VectorXd next = u;

  for (int step = 0; step < options.steps; ++step) {
    const double t = step * dt;
    const double t_next = (step + 1) * dt;
    for (int i : interior) {
      const double s = problem.source ? problem.source(domain.pos(i), t) : 0.0;
      next[i] = u[i] + dt * (diffusivity * op.lap(u, i) + s);
    }
    for (int i : problem.dirichlet_nodes) next[i] = problem.dirichlet(domain.pos(i), t_next);
    for (int i : problem.neumann_nodes) {
      next[i] = op.neumann(u, i, domain.normal(i), problem.neumann(domain.pos(i), t_next));
    }
    if (!next.allFinite()) {
      const double h = min_node_distance(domain);
      std::ostringstream msg;
      msg << "explicit time stepping became unstable at step " << step + 1 << " (dt = " << dt
          << "); the usual guideline is dt <= h_min^2 / (2 d D) = " << h * h / (2.0 * Dim * diffusivity);
      throw NumericalError(msg.str());
    }
    result.last_change = (next - u).cwiseAbs().maxCoeff();
    u.swap(next);
    if (options.snapshot_every > 0 && (step + 1) % options.snapshot_every == 0) result.snapshots.push_back(u);
  }
  result.u = std::move(u);
  return result;
}

#define MESHFREE_INSTANTIATE(D)                                                                             \
  template void find_neumann_stencils<D>(DomainDiscretization<D>&, int, std::span<const int>);              \
  template double min_node_distance<D>(const DomainDiscretization<D>&);                                     \
  template HeatResult run_heat_explicit<D>(const DomainDiscretization<D>&, const ShapeStorage<D>&,          \
                                           const HeatProblem<D>&, const HeatOptions&);
MESHFREE_INSTANTIATE(1)
MESHFREE_INSTANTIATE(2)
MESHFREE_INSTANTIATE(3)
#undef MESHFREE_INSTANTIATE

}  // namespace meshfree
