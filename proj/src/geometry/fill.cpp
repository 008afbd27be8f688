#include "meshfree/geometry/fill.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Geometry>

#include "meshfree/core/errors.hpp"
#include "meshfree/core/random.hpp"
#include "spatial_grid.hpp"

namespace meshfree {

namespace {

template <int Dim>
double spacing_at(const SpacingFunction<Dim>& h, const Vec<Dim>& p) {
  const double v = h(p);
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw GeometryError("spacing function must be positive and finite, got " + std::to_string(v));
  }
  return v;
}

/// Well spread unit directions on the (Dim-1)-sphere, used as a pattern that
/// is randomly rotated for every expanded node.
template <int Dim>
std::vector<Vec<Dim>> base_pattern(int count) {
  std::vector<Vec<Dim>> dirs;
  if constexpr (Dim == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
      const double z = 1.0 - (2.0 * k + 1.0) / count;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      dirs.emplace_back(rho * std::cos(golden * k), rho * std::sin(golden * k), z);
    }
  }
  return dirs;
}

template <int Dim>
void candidate_directions(Rng& rng, int count, const std::vector<Vec<Dim>>& pattern, std::vector<Vec<Dim>>& out) {
  out.clear();
  if constexpr (Dim == 1) {
    out.push_back(Vec<1>(-1.0));
    out.push_back(Vec<1>(1.0));
  } else if constexpr (Dim == 2) {
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    for (int k = 0; k < count; ++k) {
      const double a = phase + 2.0 * std::numbers::pi * k / count;
      out.emplace_back(std::cos(a), std::sin(a));
    }
  } else if constexpr (Dim == 3) {
    // Uniform random rotation from a normalized Gaussian quaternion.
    Eigen::Vector4d q;
    for (int i = 0; i < 4; ++i) q[i] = rng.normal();
    q.normalize();
    const Eigen::Quaterniond rot(q[0], q[1], q[2], q[3]);
    const Mat<3> r = rot.toRotationMatrix();
    for (const auto& d : pattern) out.push_back(r * d);
  } else {
    for (int k = 0; k < count; ++k) {
      Vec<Dim> v;
      for (int d = 0; d < Dim; ++d) v[d] = rng.normal();
      out.push_back(v.normalized());
    }
  }
}

}  // namespace

template <int Dim>
void fill_interior(DomainDiscretization<Dim>& domain, const Shape<Dim>& shape, const SpacingFunction<Dim>& h,
                   std::uint64_t seed, const FillOptions<Dim>& options) {
  using vec_t = Vec<Dim>;
  if (options.candidates < 1) throw GeometryError("fill needs at least one candidate per node");
  if (options.interior_type <= 0) throw GeometryError("interior type must be positive");
  if (domain.empty() && !options.start) {
    throw GeometryError("fill_interior needs seed nodes or an explicit starting point");
  }

  const auto box = shape.bbox();
  if (!box.lo.allFinite() || !box.hi.allFinite()) throw GeometryError("cannot fill an unbounded shape");

  double h_ref = 0.0;
  for (int i = 0; i < domain.size(); ++i) h_ref = std::max(h_ref, spacing_at(h, domain.pos(i)));
  if (options.start) h_ref = std::max(h_ref, spacing_at(h, *options.start));

  const double gamma = options.min_distance_factor;
  detail::SpatialGrid<Dim> grid(box.lo, box.hi, std::max(gamma * h_ref, 1e-300));
  for (int i = 0; i < domain.size(); ++i) grid.insert(i, domain.pos(i));

  if (options.start) {
    const vec_t& s = *options.start;
    if (!shape.contains_open(s)) throw GeometryError("fill starting point lies outside the shape");
    if (!grid.any_within(s, gamma * spacing_at(h, s))) {
      grid.insert(domain.add_internal_node(s, options.interior_type), s);
    }
  }

  Rng rng(seed);
  const auto pattern = base_pattern<Dim>(options.candidates);
  std::vector<vec_t> dirs;
  for (int cur = 0; cur < domain.size(); ++cur) {
    const vec_t p = domain.pos(cur);
    const double hp = spacing_at(h, p);
    candidate_directions<Dim>(rng, options.candidates, pattern, dirs);
    for (const vec_t& dir : dirs) {
      const vec_t c = p + hp * dir;
      if (!shape.contains_open(c)) continue;
      const double hc = spacing_at(h, c);
      if (grid.any_within(c, gamma * hc)) continue;
      grid.insert(domain.add_internal_node(c, options.interior_type), c);
    }
  }
}

template <int Dim>
std::map<int, int> add_ghost_nodes(DomainDiscretization<Dim>& domain, const SpacingFunction<Dim>& h, int tag) {
  if (tag == 0) throw GeometryError("ghost node tag 0 is reserved");
  std::map<int, int> mapping;
  const auto boundary = domain.boundary();
  for (int i : boundary) {
    const Vec<Dim> n = domain.normal(i);
    const Vec<Dim> g = domain.pos(i) + spacing_at(h, domain.pos(i)) * n;
    mapping[i] = tag < 0 ? domain.add_boundary_node(g, tag, n) : domain.add_internal_node(g, tag);
  }
  return mapping;
}

#define MESHFREE_INSTANTIATE(D)                                                                                   \
  template void fill_interior<D>(DomainDiscretization<D>&, const Shape<D>&, const SpacingFunction<D>&,             \
                                 std::uint64_t, const FillOptions<D>&);                                          \
  template std::map<int, int> add_ghost_nodes<D>(DomainDiscretization<D>&, const SpacingFunction<D>&, int);
MESHFREE_INSTANTIATE(1)
MESHFREE_INSTANTIATE(2)
MESHFREE_INSTANTIATE(3)
#undef MESHFREE_INSTANTIATE

}  // namespace meshfree
