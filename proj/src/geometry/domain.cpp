#include "meshfree/geometry/domain.hpp"

#include <cmath>
#include <string>

#include "meshfree/core/errors.hpp"

namespace meshfree {

template <int Dim>
int DomainDiscretization<Dim>::add_internal_node(const vec_t& p, int type) {
  if (type <= 0) throw GeometryError("interior node type must be positive, got " + std::to_string(type));
  positions_.push_back(p);
  types_.push_back(type);
  normal_slot_.push_back(-1);
  stencils_.emplace_back();
  return size() - 1;
}

template <int Dim>
int DomainDiscretization<Dim>::add_boundary_node(const vec_t& p, int type, const vec_t& normal) {
  if (type >= 0) throw GeometryError("boundary node type must be negative, got " + std::to_string(type));
  const double len = normal.norm();
  if (!(len > 0.0) || !std::isfinite(len)) throw GeometryError("boundary node needs a nonzero normal");
  positions_.push_back(p);
  types_.push_back(type);
  normal_slot_.push_back(static_cast<int>(normals_.size()));
  normals_.push_back(normal / len);
  stencils_.emplace_back();
  return size() - 1;
}

template <int Dim>
int DomainDiscretization<Dim>::add_node(const vec_t& p, int type, const vec_t& normal) {
  if (type == 0) throw GeometryError("node type 0 is reserved");
  return type > 0 ? add_internal_node(p, type) : add_boundary_node(p, type, normal);
}

template <int Dim>
void DomainDiscretization<Dim>::append(const DomainDiscretization& other) {
  for (int i = 0; i < other.size(); ++i) {
    if (other.has_normal(i)) {
      add_boundary_node(other.pos(i), other.type(i), other.normal(i));
    } else {
      add_internal_node(other.pos(i), other.type(i));
    }
  }
}

template <int Dim>
const typename DomainDiscretization<Dim>::vec_t& DomainDiscretization<Dim>::normal(int i) const {
  if (i < 0 || i >= size() || normal_slot_[i] < 0) {
    throw GeometryError("node " + std::to_string(i) + " has no normal");
  }
  return normals_[normal_slot_[i]];
}

template <int Dim>
std::vector<int> DomainDiscretization<Dim>::interior() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (types_[i] > 0) out.push_back(i);
  return out;
}

template <int Dim>
std::vector<int> DomainDiscretization<Dim>::boundary() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (types_[i] < 0) out.push_back(i);
  return out;
}

template <int Dim>
std::vector<int> DomainDiscretization<Dim>::all() const {
  std::vector<int> out(size());
  for (int i = 0; i < size(); ++i) out[i] = i;
  return out;
}

template <int Dim>
std::vector<int> DomainDiscretization<Dim>::with_type(int type) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (types_[i] == type) out.push_back(i);
  return out;
}

template <int Dim>
void DomainDiscretization<Dim>::set_stencil(int i, std::vector<int> indices) {
  if (i < 0 || i >= size()) throw GeometryError("stencil owner " + std::to_string(i) + " out of range");
  if (indices.empty() || indices.front() != i) {
    throw GeometryError("stencil of node " + std::to_string(i) + " must start with the node itself");
  }
  for (int j : indices) {
    if (j < 0 || j >= size()) {
      throw GeometryError("stencil of node " + std::to_string(i) + " references node " + std::to_string(j));
    }
  }
  stencils_[i] = std::move(indices);
}

template <int Dim>
void DomainDiscretization<Dim>::clear_stencils() {
  for (auto& s : stencils_) s.clear();
}

template <int Dim>
void DomainDiscretization<Dim>::move_boundary_node(int i, const vec_t& p, const vec_t& normal) {
  if (normal_slot_.at(i) < 0) throw GeometryError("node " + std::to_string(i) + " is not a boundary node");
  positions_[i] = p;
  normals_[normal_slot_[i]] = normal.normalized();
}

template <int Dim>
void DomainDiscretization<Dim>::validate() const {
  for (int i = 0; i < size(); ++i) {
    const std::string who = "node " + std::to_string(i);
    if (types_[i] == 0) throw GeometryError(who + " has reserved type 0");
    if (types_[i] < 0) {
      if (normal_slot_[i] < 0) throw GeometryError(who + " is a boundary node without normal");
      if (std::abs(normals_[normal_slot_[i]].norm() - 1.0) > 1e-12) {
        throw GeometryError(who + " has a non-unit normal");
      }
    }
    const auto& s = stencils_[i];
    if (!s.empty() && s.front() != i) throw GeometryError(who + " stencil does not start with itself");
    for (int j : s) {
      if (j < 0 || j >= size()) throw GeometryError(who + " stencil index out of range");
    }
  }
}

template class DomainDiscretization<1>;
template class DomainDiscretization<2>;
template class DomainDiscretization<3>;

}  // namespace meshfree
