#pragma once

#include <string>
#include <vector>

#include "meshfree/core/errors.hpp"
#include "meshfree/geometry/domain.hpp"

namespace meshfree::detail {

enum class Role : char { interior, dirichlet, neumann };

/// Interior nodes are the positive-type nodes not listed in either set.
/// Every boundary node must be listed exactly once.
template <int Dim>
std::vector<Role> classify_nodes(const DomainDiscretization<Dim>& domain, const std::vector<int>& dirichlet,
                                 const std::vector<int>& neumann) {
  const int n = domain.size();
  std::vector<Role> roles(n, Role::interior);
  std::vector<char> listed(n, 0);
  auto mark = [&](const std::vector<int>& nodes, Role role, const char* what) {
    for (int i : nodes) {
      if (i < 0 || i >= n) throw ConfigError(std::string(what) + " node " + std::to_string(i) + " out of range");
      if (listed[i]) throw ConfigError("node " + std::to_string(i) + " has more than one boundary condition");
      listed[i] = 1;
      roles[i] = role;
    }
  };
  mark(dirichlet, Role::dirichlet, "Dirichlet");
  mark(neumann, Role::neumann, "Neumann");
  for (int i = 0; i < n; ++i) {
    if (domain.is_boundary(i) && !listed[i]) {
      throw ConfigError("boundary node " + std::to_string(i) + " has no boundary condition");
    }
    if (roles[i] == Role::neumann && !domain.has_normal(i)) {
      throw ConfigError("Neumann node " + std::to_string(i) + " has no normal");
    }
  }
  return roles;
}

}  // namespace meshfree::detail
