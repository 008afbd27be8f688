#include "meshfree/io/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "meshfree/core/errors.hpp"

namespace meshfree {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.precision(17);
  return out;
}

void close_out(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_double(const std::string& s, const std::filesystem::path& path, int line) {
  const char* end = s.data() + s.size();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw IoError(path.string() + ":" + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

template <int Dim>
void write_header(std::ostream& out, int components) {
  for (int k = 0; k < Dim; ++k) out << "x_" << k << ',';
  out << "type";
  for (int c = 0; c < components; ++c) out << ",u_" << c;
  out << '\n';
}

}  // namespace

template <int Dim>
void write_nodes_csv(const DomainDiscretization<Dim>& domain, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_header<Dim>(out, 0);
  for (int i = 0; i < domain.size(); ++i) {
    for (int k = 0; k < Dim; ++k) out << domain.pos(i)[k] << ',';
    out << domain.type(i) << '\n';
  }
  close_out(out, path);

  auto normals_path = path;
  normals_path.replace_filename(path.stem().string() + "_normals.csv");
  auto nout = open_out(normals_path);
  nout << "index";
  for (int k = 0; k < Dim; ++k) nout << ",n_" << k;
  nout << '\n';
  for (int i = 0; i < domain.size(); ++i) {
    if (!domain.has_normal(i)) continue;
    nout << i;
    for (int k = 0; k < Dim; ++k) nout << ',' << domain.normal(i)[k];
    nout << '\n';
  }
  close_out(nout, normals_path);
}

template <int Dim>
void write_field_csv(const DomainDiscretization<Dim>& domain, const Eigen::MatrixXd& field,
                     const std::filesystem::path& path) {
  if (field.rows() != domain.size()) {
    throw ConfigError("field has " + std::to_string(field.rows()) + " rows for " + std::to_string(domain.size()) +
                      " nodes");
  }
  auto out = open_out(path);
  write_header<Dim>(out, static_cast<int>(field.cols()));
  for (int i = 0; i < domain.size(); ++i) {
    for (int k = 0; k < Dim; ++k) out << domain.pos(i)[k] << ',';
    out << domain.type(i);
    for (Eigen::Index c = 0; c < field.cols(); ++c) out << ',' << field(i, c);
    out << '\n';
  }
  close_out(out, path);
}

template <int Dim>
void write_field_csv(const DomainDiscretization<Dim>& domain, const std::vector<Vec<Dim>>& field,
                     const std::filesystem::path& path) {
  Eigen::MatrixXd m(field.size(), Dim);
  for (std::size_t i = 0; i < field.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = field[i].transpose();
  write_field_csv(domain, m, path);
}

template <int Dim>
FieldTable<Dim> read_field_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string() + ": empty file");
  const auto header = split(line);
  const int components = static_cast<int>(header.size()) - Dim - 1;
  if (components < 0) throw IoError(path.string() + ": header has too few columns");
  for (int k = 0; k < Dim; ++k)
    if (header[k] != "x_" + std::to_string(k)) throw IoError(path.string() + ": unexpected column " + header[k]);
  if (header[Dim] != "type") throw IoError(path.string() + ": expected column type");

  FieldTable<Dim> table;
  std::vector<double> values;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                    " columns");
    }
    Vec<Dim> p;
    for (int k = 0; k < Dim; ++k) p[k] = parse_double(cells[k], path, line_no);
    table.positions.push_back(p);
    table.types.push_back(static_cast<int>(parse_double(cells[Dim], path, line_no)));
    for (int c = 0; c < components; ++c) values.push_back(parse_double(cells[Dim + 1 + c], path, line_no));
  }
  const auto n = static_cast<Eigen::Index>(table.positions.size());
  table.values = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), n, components);
  return table;
}

void write_records_csv(const std::filesystem::path& path, const std::vector<ConvergenceRecord>& records,
                       bool with_timings) {
  auto out = open_out(path);
  write_records_csv(out, records, with_timings);
  close_out(out, path);
}

#define MESHFREE_INSTANTIATE(D)                                                                               \
  template void write_nodes_csv<D>(const DomainDiscretization<D>&, const std::filesystem::path&);             \
  template void write_field_csv<D>(const DomainDiscretization<D>&, const Eigen::MatrixXd&,                    \
                                   const std::filesystem::path&);                                             \
  template void write_field_csv<D>(const DomainDiscretization<D>&, const std::vector<Vec<D>>&,                \
                                   const std::filesystem::path&);                                             \
  template FieldTable<D> read_field_csv<D>(const std::filesystem::path&);
MESHFREE_INSTANTIATE(1)
MESHFREE_INSTANTIATE(2)
MESHFREE_INSTANTIATE(3)
#undef MESHFREE_INSTANTIATE

}  // namespace meshfree
