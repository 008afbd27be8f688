#include "meshfree/operators/sparse_system.hpp"

#include <algorithm>
#include <string>

#include "meshfree/core/errors.hpp"

namespace meshfree {

namespace {

const char* kind_name(RowKind k) {
  switch (k) {
    case RowKind::empty:
      return "empty";
    case RowKind::interior:
      return "interior";
    case RowKind::dirichlet:
      return "Dirichlet";
    case RowKind::neumann:
      return "Neumann";
  }
  return "?";
}

}  // namespace

SparseSystem::SparseSystem(int n) : rows_(n), owner_(n), kinds_(n, RowKind::empty), rhs_(Eigen::VectorXd::Zero(n)) {
  if (n < 0) throw Error("system size must be nonnegative");
  for (int i = 0; i < n; ++i) owner_[i] = i;
}

void SparseSystem::check_index(int row, const char* what) const {
  if (row < 0 || row >= size()) {
    throw Error(std::string(what) + " " + std::to_string(row) + " out of range for a system of size " +
                std::to_string(size()));
  }
}

void SparseSystem::assign_row(int row, int node) {
  check_index(row, "row");
  if (kinds_[row] != RowKind::empty) throw GuardError("row " + std::to_string(row) + " is already written");
  owner_[row] = node;
}

void SparseSystem::begin_row(int row, int node, RowKind kind) {
  check_index(row, "row");
  if (finalized_) throw GuardError("system is already finalized");
#if MESHFREE_CHECKS
  if (owner_[row] != node) {
    throw GuardError("node " + std::to_string(node) + " may not write row " + std::to_string(row) +
                     ", which belongs to node " + std::to_string(owner_[row]));
  }
#endif
  const RowKind current = kinds_[row];
  const bool compatible = current == RowKind::empty || (current == kind && kind != RowKind::dirichlet);
  if (!compatible) {
    throw GuardError("row " + std::to_string(row) + " already holds a " + kind_name(current) +
                     " equation; cannot add a " + kind_name(kind) + " one");
  }
  kinds_[row] = kind;
}

void SparseSystem::add(int row, int col, double value) {
  check_index(row, "row");
  check_index(col, "column");
  if (finalized_) throw GuardError("system is already finalized");
  rows_[row].emplace_back(col, value);
}

void SparseSystem::set_rhs(int row, double value) {
  check_index(row, "row");
  rhs_[row] = value;
}

void SparseSystem::finalize() {
  std::vector<Eigen::Triplet<double>> triplets;
  std::size_t total = 0;
  for (const auto& r : rows_) total += r.size();
  triplets.reserve(total);
  for (int i = 0; i < size(); ++i) {
    if (rows_[i].empty()) throw GuardError("row " + std::to_string(i) + " has no equation");
    for (const auto& [c, v] : rows_[i]) triplets.emplace_back(i, c, v);
  }
  matrix_.resize(size(), size());
  matrix_.setFromTriplets(triplets.begin(), triplets.end());
  matrix_.makeCompressed();
  finalized_ = true;
}

const SparseSystem::Matrix& SparseSystem::matrix() const {
  if (!finalized_) throw GuardError("system is not finalized");
  return matrix_;
}

int SparseSystem::row_nnz(int row) const {
  check_index(row, "row");
  std::vector<int> cols;
  for (const auto& e : rows_[row]) cols.push_back(e.first);
  std::sort(cols.begin(), cols.end());
  return static_cast<int>(std::unique(cols.begin(), cols.end()) - cols.begin());
}

double SparseSystem::row_dot(int row, const Eigen::VectorXd& u) const {
  check_index(row, "row");
  double sum = 0.0;
  for (const auto& [c, v] : rows_[row]) sum += v * u[c];
  return sum;
}

Eigen::VectorXd SparseSystem::multiply(const Eigen::VectorXd& u) const {
  if (u.size() != size()) throw Error("vector size does not match the system");
  Eigen::VectorXd out(size());
  for (int i = 0; i < size(); ++i) out[i] = row_dot(i, u);
  return out;
}

}  // namespace meshfree
