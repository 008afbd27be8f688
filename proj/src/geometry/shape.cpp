#include "meshfree/geometry/shape.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <variant>

#include "meshfree/core/errors.hpp"
#include "meshfree/core/random.hpp"
#include "meshfree/geometry/fill.hpp"
#include "meshfree/geometry/kdtree.hpp"

namespace meshfree {

template <int Dim>
struct Shape<Dim>::Node {
  struct Ball {
    vec_t center;
    double radius;
    int tag;
  };
  struct Box {
    vec_t lo;
    vec_t hi;
    int tag;
  };
  struct Union {
    Shape a;
    Shape b;
  };
  struct Difference {
    Shape a;
    Shape b;
  };
  struct Translate {
    Shape inner;
    vec_t offset;
  };
  struct Rotate {
    Shape inner;
    Mat<Dim> rotation;
  };
  std::variant<Ball, Box, Union, Difference, Translate, Rotate> value;
};

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Relative slack for membership of points computed on the boundary.
constexpr double kMembershipTol = 1e-12;
constexpr double kMergeFactor = 0.75;

template <int Dim>
double checked_spacing(const SpacingFunction<Dim>& h, const Vec<Dim>& p) {
  const double v = h(p);
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw GeometryError("spacing function must be positive and finite, got " + std::to_string(v));
  }
  return v;
}

/// Curve parameters in [0, 1] spaced so that consecutive nodes are about
/// h apart: the cumulative integral of ds / h is split into equal parts.
/// Closed curves return parameters in [0, 1); open curves only the interior
/// parameters (endpoints belong to the caller).
template <int Dim, class Curve>
std::vector<double> curve_parameters(const Curve& gamma, const SpacingFunction<Dim>& h, bool closed) {
  auto integrate = [&](int samples, std::vector<double>& ts, std::vector<double>& cum) {
    ts.resize(samples + 1);
    cum.resize(samples + 1);
    Vec<Dim> prev = gamma(0.0);
    double inv_prev = 1.0 / checked_spacing(h, prev);
    ts[0] = 0.0;
    cum[0] = 0.0;
    for (int k = 1; k <= samples; ++k) {
      const double t = static_cast<double>(k) / samples;
      const Vec<Dim> cur = gamma(t);
      const double inv_cur = 1.0 / checked_spacing(h, cur);
      ts[k] = t;
      cum[k] = cum[k - 1] + (cur - prev).norm() * 0.5 * (inv_prev + inv_cur);
      prev = cur;
      inv_prev = inv_cur;
    }
  };

  std::vector<double> ts, cum;
  int samples = 2048;
  integrate(samples, ts, cum);
  if (cum.back() * 16 > samples) {
    samples = 16 * static_cast<int>(std::ceil(cum.back()));
    integrate(samples, ts, cum);
  }
  const double total = cum.back();

  auto invert = [&](double target) {
    const auto it = std::lower_bound(cum.begin(), cum.end(), target);
    const auto k = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(it - cum.begin(), 1, samples));
    const double span = cum[k] - cum[k - 1];
    const double frac = span > 0 ? (target - cum[k - 1]) / span : 0.0;
    return ts[k - 1] + frac * (ts[k] - ts[k - 1]);
  };

  std::vector<double> params;
  if (closed) {
    const long n = std::max(3L, std::lround(total));
    params.push_back(0.0);
    for (long k = 1; k < n; ++k) params.push_back(invert(total * static_cast<double>(k) / static_cast<double>(n)));
  } else {
    const long segments = std::max(1L, std::lround(total));
    for (long k = 1; k < segments; ++k) {
      params.push_back(invert(total * static_cast<double>(k) / static_cast<double>(segments)));
    }
  }
  return params;
}

// ---------------------------------------------------------------- balls

template <int Dim>
DomainDiscretization<Dim> ball_boundary(const Vec<Dim>& center, double radius, int tag,
                                        const SpacingFunction<Dim>& h) {
  using vec_t = Vec<Dim>;
  DomainDiscretization<Dim> out;
  if constexpr (Dim == 1) {
    checked_spacing(h, center);
    out.add_boundary_node(center - vec_t::Constant(radius), tag, vec_t::Constant(-1.0));
    out.add_boundary_node(center + vec_t::Constant(radius), tag, vec_t::Constant(1.0));
  } else if constexpr (Dim == 2) {
    auto gamma = [&](double t) {
      const double a = 2.0 * std::numbers::pi * t;
      return vec_t(center[0] + radius * std::cos(a), center[1] + radius * std::sin(a));
    };
    for (double t : curve_parameters<Dim>(gamma, h, true)) {
      const double a = 2.0 * std::numbers::pi * t;
      const vec_t dir(std::cos(a), std::sin(a));
      out.add_boundary_node(center + radius * dir, tag, dir);
    }
  } else if constexpr (Dim == 3) {
    // Fibonacci sphere at the density of the smallest sampled spacing,
    // thinned where h is larger, then one Laplacian (Lloyd-style) smoothing
    // pass with reprojection onto the sphere.
    constexpr int kProbe = 2000;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    auto fib = [&](int k, int n) {
      const double z = 1.0 - (2.0 * k + 1.0) / n;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * k;
      return vec_t(rho * std::cos(phi), rho * std::sin(phi), z);
    };
    double h_min = std::numeric_limits<double>::infinity();
    for (int k = 0; k < kProbe; ++k) h_min = std::min(h_min, checked_spacing(h, vec_t(center + radius * fib(k, kProbe))));
    const double area = 4.0 * std::numbers::pi * radius * radius;
    const int count = std::max(4, static_cast<int>(std::ceil(area / (std::sqrt(3.0) / 2.0 * h_min * h_min))));

    std::vector<vec_t> dirs;
    std::vector<double> spacing;
    std::vector<vec_t> kept;
    dirs.reserve(count);
    {
      // Thinning keeps a point when no kept point is closer than 0.75 h.
      std::map<std::array<long, 3>, std::vector<int>> buckets;
      const double cell = std::max(h_min, 1e-300);
      auto key = [&](const vec_t& p) {
        return std::array<long, 3>{std::lround(std::floor(p[0] / cell)), std::lround(std::floor(p[1] / cell)),
                                   std::lround(std::floor(p[2] / cell))};
      };
      for (int k = 0; k < count; ++k) {
        const vec_t u = fib(k, count);
        const vec_t p = radius * u;
        const double hp = checked_spacing(h, vec_t(center + p));
        const double r = kMergeFactor * hp;
        const long reach = static_cast<long>(std::ceil(r / cell));
        const auto base = key(p);
        bool clash = false;
        for (long a = -reach; a <= reach && !clash; ++a)
          for (long b = -reach; b <= reach && !clash; ++b)
            for (long c = -reach; c <= reach && !clash; ++c) {
              auto it = buckets.find({base[0] + a, base[1] + b, base[2] + c});
              if (it == buckets.end()) continue;
              for (int j : it->second)
                if ((kept[j] - p).squaredNorm() < r * r) {
                  clash = true;
                  break;
                }
            }
        if (clash) continue;
        buckets[base].push_back(static_cast<int>(kept.size()));
        kept.push_back(p);
        dirs.push_back(u);
        spacing.push_back(hp);
      }
    }
    if (dirs.size() > 7) {
      // Nodes move in order; a move that would break the 0.75 h separation
      // against the current neighbour positions is skipped.
      constexpr int kNeighbours = 20;
      const KDTree<3> tree(kept);
      std::vector<int> idx;
      std::vector<double> d2;
      for (std::size_t i = 0; i < dirs.size(); ++i) {
        tree.knn(kept[i], kNeighbours, idx, d2);
        const std::size_t ring = std::min<std::size_t>(7, idx.size());
        vec_t centroid = vec_t::Zero();
        for (std::size_t j = 1; j < ring; ++j) centroid += radius * dirs[idx[j]];
        centroid /= static_cast<double>(ring - 1);
        const vec_t p = radius * dirs[i];
        const vec_t moved = (p + 0.5 * (centroid - p)).normalized();
        const double hp = checked_spacing(h, vec_t(center + radius * moved));
        bool ok = true;
        for (std::size_t j = 1; j < idx.size() && ok; ++j) {
          const vec_t q = radius * dirs[idx[j]];
          const double r = kMergeFactor * std::min(hp, spacing[idx[j]]);
          ok = (radius * moved - q).squaredNorm() >= r * r;
        }
        if (!ok) continue;
        dirs[i] = moved;
        spacing[i] = hp;
      }
    }
    for (const vec_t& u : dirs) out.add_boundary_node(center + radius * u, tag, u);
  } else {
    throw GeometryError("ball boundary discretization is implemented for dimensions 1 to 3");
  }
  return out;
}

// ---------------------------------------------------------------- boxes

template <int Dim>
DomainDiscretization<Dim> box_boundary(const Vec<Dim>& lo, const Vec<Dim>& hi, int tag,
                                       const SpacingFunction<Dim>& h, std::uint64_t seed) {
  using vec_t = Vec<Dim>;
  DomainDiscretization<Dim> out;
  if constexpr (Dim == 1) {
    checked_spacing(h, lo);
    checked_spacing(h, hi);
    out.add_boundary_node(lo, tag, vec_t::Constant(-1.0));
    out.add_boundary_node(hi, tag, vec_t::Constant(1.0));
  } else if constexpr (Dim == 2) {
    // Corners first, then edges, each parameterized from its low end.
    const std::array<vec_t, 4> corners = {vec_t(lo[0], lo[1]), vec_t(hi[0], lo[1]), vec_t(lo[0], hi[1]),
                                          vec_t(hi[0], hi[1])};
    for (const vec_t& c : corners) {
      checked_spacing(h, c);
      const vec_t n(c[0] == lo[0] ? -1.0 : 1.0, c[1] == lo[1] ? -1.0 : 1.0);
      out.add_boundary_node(c, tag, n);
    }
    struct Edge {
      vec_t a;
      vec_t b;
      vec_t normal;
    };
    const std::array<Edge, 4> edges = {Edge{corners[0], corners[1], vec_t(0, -1)},
                                       Edge{corners[2], corners[3], vec_t(0, 1)},
                                       Edge{corners[0], corners[2], vec_t(-1, 0)},
                                       Edge{corners[1], corners[3], vec_t(1, 0)}};
    for (const Edge& e : edges) {
      auto gamma = [&](double t) { return vec_t(e.a + t * (e.b - e.a)); };
      for (double t : curve_parameters<Dim>(gamma, h, false)) out.add_boundary_node(gamma(t), tag, e.normal);
    }
  } else if constexpr (Dim == 3) {
    // Each face is discretized as a full 2D box; nodes on shared edges are
    // produced identically by neighbouring faces and merged, with normals
    // averaged over the faces that contain them.
    std::map<std::array<double, 3>, int> seen;
    std::vector<vec_t> positions;
    std::vector<vec_t> normal_sums;
    int face_id = 0;
    for (int axis = 0; axis < 3; ++axis) {
      const int u = axis == 0 ? 1 : 0;
      const int v = axis == 2 ? 1 : 2;
      for (int side = 0; side < 2; ++side, ++face_id) {
        const double fixed = side == 0 ? lo[axis] : hi[axis];
        vec_t face_normal = vec_t::Zero();
        face_normal[axis] = side == 0 ? -1.0 : 1.0;
        auto embed = [=](const Vec<2>& q) {
          vec_t p;
          p[axis] = fixed;
          p[u] = q[0];
          p[v] = q[1];
          return p;
        };
        SpacingFunction<2> h2 = [&h, embed](const Vec<2>& q) { return h(embed(q)); };
        const auto face = Shape<2>::box(Vec<2>(lo[u], lo[v]), Vec<2>(hi[u], hi[v]))
                              .discretize(h2, derive_seed(seed, static_cast<std::uint64_t>(face_id)));
        for (int i = 0; i < face.size(); ++i) {
          const vec_t p = embed(face.pos(i));
          const std::array<double, 3> k = {p[0], p[1], p[2]};
          auto [it, inserted] = seen.emplace(k, static_cast<int>(positions.size()));
          if (inserted) {
            positions.push_back(p);
            normal_sums.push_back(face_normal);
          } else {
            normal_sums[it->second] += face_normal;
          }
        }
      }
    }
    for (std::size_t i = 0; i < positions.size(); ++i) out.add_boundary_node(positions[i], tag, normal_sums[i]);
  } else {
    throw GeometryError("box boundary discretization is implemented for dimensions 1 to 3");
  }
  return out;
}

/// Appends nodes of `extra` that keep at least 0.75 h from the nodes already
/// in `base`.
template <int Dim>
void merge_boundary(DomainDiscretization<Dim>& base, const DomainDiscretization<Dim>& extra,
                    const SpacingFunction<Dim>& h) {
  if (base.empty()) {
    base.append(extra);
    return;
  }
  const KDTree<Dim> tree(base.positions());
  for (int i = 0; i < extra.size(); ++i) {
    const double r = kMergeFactor * checked_spacing(h, extra.pos(i));
    if (tree.any_within(extra.pos(i), r)) continue;
    base.add_boundary_node(extra.pos(i), extra.type(i), extra.normal(i));
  }
}

}  // namespace

template <int Dim>
Shape<Dim> Shape<Dim>::ball(const vec_t& center, double radius, int boundary_type) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw GeometryError("ball radius must be positive");
  if (boundary_type >= 0) throw GeometryError("boundary type must be negative");
  return Shape(std::make_shared<const Node>(Node{typename Node::Ball{center, radius, boundary_type}}));
}

template <int Dim>
Shape<Dim> Shape<Dim>::box(const vec_t& lo, const vec_t& hi, int boundary_type) {
  if (!(lo.array() < hi.array()).all()) throw GeometryError("box requires lo < hi componentwise");
  if (!lo.allFinite() || !hi.allFinite()) throw GeometryError("box corners must be finite");
  if (boundary_type >= 0) throw GeometryError("boundary type must be negative");
  return Shape(std::make_shared<const Node>(Node{typename Node::Box{lo, hi, boundary_type}}));
}

template <int Dim>
Shape<Dim> Shape<Dim>::unite(const Shape& a, const Shape& b) {
  return Shape(std::make_shared<const Node>(Node{typename Node::Union{a, b}}));
}

template <int Dim>
Shape<Dim> Shape<Dim>::subtract(const Shape& a, const Shape& b) {
  return Shape(std::make_shared<const Node>(Node{typename Node::Difference{a, b}}));
}

template <int Dim>
Shape<Dim> Shape<Dim>::translated(const vec_t& offset) const {
  return Shape(std::make_shared<const Node>(Node{typename Node::Translate{*this, offset}}));
}

template <int Dim>
Shape<Dim> Shape<Dim>::rotated(const Mat<Dim>& rotation) const {
  if ((rotation.transpose() * rotation - Mat<Dim>::Identity()).norm() > 1e-10) {
    throw GeometryError("rotation matrix must be orthogonal");
  }
  return Shape(std::make_shared<const Node>(Node{typename Node::Rotate{*this, rotation}}));
}

template <int Dim>
bool Shape<Dim>::contains(const vec_t& p) const {
  return std::visit(
      Overloaded{
          [&](const typename Node::Ball& b) {
            return (p - b.center).norm() <= b.radius * (1.0 + kMembershipTol);
          },
          [&](const typename Node::Box& b) {
            const vec_t tol = kMembershipTol * (b.hi - b.lo);
            return ((p - b.lo + tol).array() >= 0).all() && ((b.hi - p + tol).array() >= 0).all();
          },
          [&](const typename Node::Union& u) { return u.a.contains(p) || u.b.contains(p); },
          [&](const typename Node::Difference& d) { return d.a.contains(p) && !d.b.contains_open(p); },
          [&](const typename Node::Translate& t) { return t.inner.contains(p - t.offset); },
          [&](const typename Node::Rotate& r) { return r.inner.contains(r.rotation.transpose() * p); },
      },
      node_->value);
}

template <int Dim>
bool Shape<Dim>::contains_open(const vec_t& p) const {
  return std::visit(
      Overloaded{
          [&](const typename Node::Ball& b) {
            return (p - b.center).norm() < b.radius * (1.0 - kMembershipTol);
          },
          [&](const typename Node::Box& b) {
            const vec_t tol = kMembershipTol * (b.hi - b.lo);
            return ((p - b.lo - tol).array() > 0).all() && ((b.hi - p - tol).array() > 0).all();
          },
          [&](const typename Node::Union& u) { return u.a.contains_open(p) || u.b.contains_open(p); },
          [&](const typename Node::Difference& d) { return d.a.contains_open(p) && !d.b.contains(p); },
          [&](const typename Node::Translate& t) { return t.inner.contains_open(p - t.offset); },
          [&](const typename Node::Rotate& r) { return r.inner.contains_open(r.rotation.transpose() * p); },
      },
      node_->value);
}

template <int Dim>
BoundingBox<Dim> Shape<Dim>::bbox() const {
  return std::visit(
      Overloaded{
          [&](const typename Node::Ball& b) {
            return BoundingBox<Dim>{b.center.array() - b.radius, b.center.array() + b.radius};
          },
          [&](const typename Node::Box& b) { return BoundingBox<Dim>{b.lo, b.hi}; },
          [&](const typename Node::Union& u) {
            const auto x = u.a.bbox(), y = u.b.bbox();
            return BoundingBox<Dim>{x.lo.cwiseMin(y.lo), x.hi.cwiseMax(y.hi)};
          },
          [&](const typename Node::Difference& d) { return d.a.bbox(); },
          [&](const typename Node::Translate& t) {
            const auto x = t.inner.bbox();
            return BoundingBox<Dim>{x.lo + t.offset, x.hi + t.offset};
          },
          [&](const typename Node::Rotate& r) {
            const auto x = r.inner.bbox();
            BoundingBox<Dim> out{vec_t::Constant(std::numeric_limits<double>::infinity()),
                                 vec_t::Constant(-std::numeric_limits<double>::infinity())};
            for (int mask = 0; mask < (1 << Dim); ++mask) {
              vec_t corner;
              for (int d = 0; d < Dim; ++d) corner[d] = (mask >> d) & 1 ? x.hi[d] : x.lo[d];
              const vec_t q = r.rotation * corner;
              out.lo = out.lo.cwiseMin(q);
              out.hi = out.hi.cwiseMax(q);
            }
            return out;
          },
      },
      node_->value);
}

template <int Dim>
DomainDiscretization<Dim> Shape<Dim>::discretize_boundary(const SpacingFunction<Dim>& h, std::uint64_t seed) const {
  const auto box = bbox();
  if (!box.lo.allFinite() || !box.hi.allFinite()) throw GeometryError("cannot discretize an unbounded shape");
  return std::visit(
      Overloaded{
          [&](const typename Node::Ball& b) { return ball_boundary<Dim>(b.center, b.radius, b.tag, h); },
          [&](const typename Node::Box& b) { return box_boundary<Dim>(b.lo, b.hi, b.tag, h, seed); },
          [&](const typename Node::Union& u) {
            const auto da = u.a.discretize_boundary(h, derive_seed(seed, 1));
            const auto db = u.b.discretize_boundary(h, derive_seed(seed, 2));
            DomainDiscretization<Dim> out, extra;
            for (int i = 0; i < da.size(); ++i)
              if (!u.b.contains_open(da.pos(i))) out.add_boundary_node(da.pos(i), da.type(i), da.normal(i));
            for (int i = 0; i < db.size(); ++i)
              if (!u.a.contains_open(db.pos(i))) extra.add_boundary_node(db.pos(i), db.type(i), db.normal(i));
            merge_boundary(out, extra, h);
            return out;
          },
          [&](const typename Node::Difference& d) {
            const auto da = d.a.discretize_boundary(h, derive_seed(seed, 1));
            const auto db = d.b.discretize_boundary(h, derive_seed(seed, 2));
            DomainDiscretization<Dim> out, extra;
            for (int i = 0; i < da.size(); ++i)
              if (!d.b.contains_open(da.pos(i))) out.add_boundary_node(da.pos(i), da.type(i), da.normal(i));
            for (int i = 0; i < db.size(); ++i)
              if (d.a.contains_open(db.pos(i))) extra.add_boundary_node(db.pos(i), db.type(i), -db.normal(i));
            merge_boundary(out, extra, h);
            return out;
          },
          [&](const typename Node::Translate& t) {
            const vec_t offset = t.offset;
            SpacingFunction<Dim> inner_h = [&h, offset](const vec_t& q) { return h(q + offset); };
            auto inner = t.inner.discretize_boundary(inner_h, seed);
            DomainDiscretization<Dim> out;
            for (int i = 0; i < inner.size(); ++i)
              out.add_boundary_node(inner.pos(i) + offset, inner.type(i), inner.normal(i));
            return out;
          },
          [&](const typename Node::Rotate& r) {
            const Mat<Dim> rot = r.rotation;
            SpacingFunction<Dim> inner_h = [&h, rot](const vec_t& q) { return h(rot * q); };
            auto inner = r.inner.discretize_boundary(inner_h, seed);
            DomainDiscretization<Dim> out;
            for (int i = 0; i < inner.size(); ++i)
              out.add_boundary_node(rot * inner.pos(i), inner.type(i), rot * inner.normal(i));
            return out;
          },
      },
      node_->value);
}

template <int Dim>
DomainDiscretization<Dim> Shape<Dim>::discretize(const SpacingFunction<Dim>& h, std::uint64_t seed,
                                                 int interior_type) const {
  auto domain = discretize_boundary(h, seed);
  FillOptions<Dim> options;
  options.interior_type = interior_type;
  if (domain.empty()) {
    const auto box = bbox();
    options.start = (0.5 * (box.lo + box.hi)).eval();
  }
  fill_interior(domain, *this, h, derive_seed(seed, 0xf111), options);
  return domain;
}

template class Shape<1>;
template class Shape<2>;
template class Shape<3>;

}  // namespace meshfree
