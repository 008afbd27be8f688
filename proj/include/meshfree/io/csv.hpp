#pragma once

#include <filesystem>
#include <vector>

#include <Eigen/Core>

#include "meshfree/geometry/domain.hpp"
#include "meshfree/pde/convergence.hpp"

namespace meshfree {

/// `x_0..x_{d-1},type`, one row per node. Normals go to a sibling file
/// `<stem>_normals.csv` with columns `index,n_0..` for boundary nodes.
template <int Dim>
void write_nodes_csv(const DomainDiscretization<Dim>& domain, const std::filesystem::path& path);

/// `x_0..x_{d-1},type,u_0..u_{k-1}` with one row per node and one column per
/// field component (a scalar field is a single column). Values are written
/// with 17 significant digits so reading them back is exact.
template <int Dim>
void write_field_csv(const DomainDiscretization<Dim>& domain, const Eigen::MatrixXd& field,
                     const std::filesystem::path& path);

template <int Dim>
void write_field_csv(const DomainDiscretization<Dim>& domain, const std::vector<Vec<Dim>>& field,
                     const std::filesystem::path& path);

template <int Dim>
struct FieldTable {
  std::vector<Vec<Dim>> positions;
  std::vector<int> types;
  Eigen::MatrixXd values;
};

/// Reads a file written by write_field_csv. Throws IoError on malformed input.
template <int Dim>
FieldTable<Dim> read_field_csv(const std::filesystem::path& path);

void write_records_csv(const std::filesystem::path& path, const std::vector<ConvergenceRecord>& records,
                       bool with_timings = true);

}  // namespace meshfree
