#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace meshfree {

enum class RowKind { empty, interior, dirichlet, neumann };

/// Square sparse system M u = r under assembly.
///
/// Entries are recorded per row in insertion order; duplicates are summed
/// when the system is finalized. Each row belongs to one node (by default the
/// node with the same index) and may hold one kind of equation.
class SparseSystem {
 public:
  using Matrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  explicit SparseSystem(int n);

  [[nodiscard]] int size() const { return static_cast<int>(rows_.size()); }

  /// Lets equations of `node` be written into `row` (e.g. a ghost row).
  void assign_row(int row, int node);
  [[nodiscard]] int owner(int row) const { return owner_[row]; }
  [[nodiscard]] RowKind kind(int row) const { return kinds_[row]; }

  /// Checks ownership and kind compatibility, then marks the row.
  void begin_row(int row, int node, RowKind kind);
  void add(int row, int col, double value);
  void set_rhs(int row, double value);

  /// Builds the compressed matrix. Throws GuardError if a row is empty.
  void finalize();
  [[nodiscard]] bool finalized() const { return finalized_; }

  [[nodiscard]] const Matrix& matrix() const;
  [[nodiscard]] const Eigen::VectorXd& rhs() const { return rhs_; }
  [[nodiscard]] const std::vector<std::pair<int, double>>& row_entries(int row) const { return rows_[row]; }
  /// Number of distinct columns in the row.
  [[nodiscard]] int row_nnz(int row) const;

  /// (M u)_row with entries summed in insertion order.
  [[nodiscard]] double row_dot(int row, const Eigen::VectorXd& u) const;
  [[nodiscard]] Eigen::VectorXd multiply(const Eigen::VectorXd& u) const;

 private:
  void check_index(int row, const char* what) const;

  std::vector<std::vector<std::pair<int, double>>> rows_;
  std::vector<int> owner_;
  std::vector<RowKind> kinds_;
  Eigen::VectorXd rhs_;
  Matrix matrix_;
  bool finalized_ = false;
};

}  // namespace meshfree
