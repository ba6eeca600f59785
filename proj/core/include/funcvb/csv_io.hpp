#ifndef FUNCVB_CSV_IO_HPP_
#define FUNCVB_CSV_IO_HPP_

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "funcvb/types.hpp"

namespace funcvb {

// Dataset CSV: first row is the grid with header cell "t", each
// following row is one curve. Labels travel in a separate single-column
// CSV with header "label" and values in 1..K.

FunctionalDataset read_dataset_csv(const std::string& path);
void write_dataset_csv(const std::string& path, const FunctionalDataset& data);

std::vector<int> read_labels_csv(const std::string& path);          // returns 0-based
void write_labels_csv(const std::string& path, const std::vector<int>& labels_zero_based);

// Curves-on-grid CSV (e.g. true or estimated cluster means): header
// "t,curve1,...,curveK", one row per grid point.
void write_curves_csv(const std::string& path, const Eigen::VectorXd& grid,
                      const Eigen::MatrixXd& curves_by_row);

struct CurvesOnGrid {
  Eigen::VectorXd grid;
  Eigen::MatrixXd curves_by_row;  // K x n
};
CurvesOnGrid read_curves_csv(const std::string& path);

}  // namespace funcvb

#endif  // FUNCVB_CSV_IO_HPP_
