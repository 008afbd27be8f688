#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "meshfree/geometry/domain.hpp"
#include "meshfree/geometry/shape.hpp"

namespace meshfree {

template <int Dim>
struct FillOptions {
  /// Candidates spawned around each expanded node.
  int candidates = 15;
  /// Candidates closer than `min_distance_factor * h(candidate)` to an
  /// existing node are rejected.
  double min_distance_factor = 0.75;
  int interior_type = 1;
  /// Starting point used when the domain has no nodes yet.
  std::optional<Vec<Dim>> start;
};

/// Fills the interior of `shape` with nodes of spacing `h`.
///
/// Existing nodes (normally the boundary) seed a FIFO queue; each dequeued
/// node p spawns candidates at distance h(p) and a candidate is appended when
/// it lies in the open interior and no node is closer than 0.75 h. The fill
/// ends when the queue is exhausted. The result depends only on the inputs
/// and the seed.
template <int Dim>
void fill_interior(DomainDiscretization<Dim>& domain, const Shape<Dim>& shape, const SpacingFunction<Dim>& h,
                   std::uint64_t seed, const FillOptions<Dim>& options = {});

/// Appends a ghost node at p + h(p) n for every boundary node p present at
/// the time of the call. Ghosts get type `tag` (nonzero); negative tags copy
/// the parent normal. Returns boundary index -> ghost index.
template <int Dim>
std::map<int, int> add_ghost_nodes(DomainDiscretization<Dim>& domain, const SpacingFunction<Dim>& h, int tag);

}  // namespace meshfree
