#include "funcvb/csv_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "funcvb/errors.hpp"

namespace funcvb {

namespace {

std::vector<std::string_view> split_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return cells;
}

double parse_cell(std::string_view cell, long row, long column) {
  // trim spaces and a trailing CR
  while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
  while (!cell.empty() &&
         (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r')) {
    cell.remove_suffix(1);
  }
  if (cell.empty()) throw ParseError("empty cell", row, column);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
    throw ParseError("non-numeric cell '" + std::string(cell) + "'", row, column);
  }
  return value;
}

}  // namespace

FunctionalDataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty dataset file", 1);
  auto header = split_line(line);
  if (header.empty() || (header[0] != "t" && header[0] != "t\r")) {
    throw ParseError("dataset header must start with 't'", 1, 1);
  }

  FunctionalDataset data;
  const long n = static_cast<long>(header.size()) - 1;
  if (n < 2) throw ParseError("dataset needs at least two grid points", 1);
  data.grid.resize(n);
  for (long j = 0; j < n; ++j) data.grid[j] = parse_cell(header[j + 1], 1, j + 2);

  std::vector<Eigen::VectorXd> curves;
  long row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_line(line);
    if (static_cast<long>(cells.size()) != n + 1) {
      throw ParseError("expected " + std::to_string(n + 1) + " cells, found " +
                           std::to_string(cells.size()),
                       row);
    }
    Eigen::VectorXd curve(n);
    for (long j = 0; j < n; ++j) curve[j] = parse_cell(cells[j + 1], row, j + 2);
    curves.push_back(std::move(curve));
  }
  if (curves.empty()) throw ParseError("dataset has no curves", row);

  data.y.resize(static_cast<long>(curves.size()), n);
  for (std::size_t i = 0; i < curves.size(); ++i) data.y.row(static_cast<long>(i)) = curves[i];
  data.validate();
  return data;
}

void write_dataset_csv(const std::string& path, const FunctionalDataset& data) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out.precision(17);
  out << "t";
  for (Eigen::Index j = 0; j < data.grid.size(); ++j) out << "," << data.grid[j];
  out << "\n";
  for (Eigen::Index i = 0; i < data.y.rows(); ++i) {
    out << "curve" << (i + 1);
    for (Eigen::Index j = 0; j < data.y.cols(); ++j) out << "," << data.y(i, j);
    out << "\n";
  }
  if (!out) throw IoError("failed writing " + path);
}

std::vector<int> read_labels_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty labels file", 1);
  std::vector<int> labels;
  long row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const double value = parse_cell(line, row, 1);
    const int label = static_cast<int>(value);
    if (label < 1 || static_cast<double>(label) != value) {
      throw ParseError("labels must be integers >= 1", row, 1);
    }
    labels.push_back(label - 1);
  }
  if (labels.empty()) throw ParseError("labels file has no rows", row);
  return labels;
}

void write_labels_csv(const std::string& path, const std::vector<int>& labels_zero_based) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "label\n";
  for (int label : labels_zero_based) out << (label + 1) << "\n";
  if (!out) throw IoError("failed writing " + path);
}

CurvesOnGrid read_curves_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty curves file", 1);
  const auto header = split_line(line);
  if (header.empty() || (header[0] != "t" && header[0] != "t\r")) {
    throw ParseError("curves header must start with 't'", 1, 1);
  }
  const long k = static_cast<long>(header.size()) - 1;
  if (k < 1) throw ParseError("curves file needs at least one curve column", 1);

  std::vector<double> grid_values;
  std::vector<std::vector<double>> columns(k);
  long row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_line(line);
    if (static_cast<long>(cells.size()) != k + 1) {
      throw ParseError("expected " + std::to_string(k + 1) + " cells", row);
    }
    grid_values.push_back(parse_cell(cells[0], row, 1));
    for (long c = 0; c < k; ++c) columns[c].push_back(parse_cell(cells[c + 1], row, c + 2));
  }
  if (grid_values.size() < 2) throw ParseError("curves file needs at least two grid rows", row);

  CurvesOnGrid out;
  out.grid = Eigen::Map<Eigen::VectorXd>(grid_values.data(), grid_values.size());
  out.curves_by_row.resize(k, static_cast<long>(grid_values.size()));
  for (long c = 0; c < k; ++c) {
    for (std::size_t j = 0; j < grid_values.size(); ++j) {
      out.curves_by_row(c, static_cast<long>(j)) = columns[c][j];
    }
  }
  return out;
}

void write_curves_csv(const std::string& path, const Eigen::VectorXd& grid,
                      const Eigen::MatrixXd& curves_by_row) {
  if (curves_by_row.cols() != grid.size()) throw ShapeError("curves do not match grid length");
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out.precision(17);
  out << "t";
  for (Eigen::Index c = 0; c < curves_by_row.rows(); ++c) out << ",curve" << (c + 1);
  out << "\n";
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    out << grid[j];
    for (Eigen::Index c = 0; c < curves_by_row.rows(); ++c) out << "," << curves_by_row(c, j);
    out << "\n";
  }
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace funcvb
