#pragma once

#include <span>

#include "meshfree/geometry/domain.hpp"

namespace meshfree {

/// Stencils of the `n` closest nodes.
///
/// For every node in `for_which` the stencil becomes the `n` nodes of
/// `search_among` nearest to it, self first and the rest by increasing
/// distance with ties broken by ascending index. Every node of `for_which`
/// must also appear in `search_among`.
template <int Dim>
void find_closest_stencils(DomainDiscretization<Dim>& domain, int n, std::span<const int> for_which,
                           std::span<const int> search_among);

/// All nodes, searching among all nodes.
template <int Dim>
void find_closest_stencils(DomainDiscretization<Dim>& domain, int n);

}  // namespace meshfree
