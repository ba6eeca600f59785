#ifndef FUNCVB_BASIS_HPP_
#define FUNCVB_BASIS_HPP_

#include <Eigen/Dense>
#include <vector>

namespace funcvb {

// Clamped B-spline basis on [domain_lo, domain_hi]: endpoint knots
// repeated `order` times, count - order interior knots equally spaced.
struct BasisSpec {
  double domain_lo = 0.0;
  double domain_hi = 1.0;
  int count = 0;   // number of basis functions (M)
  int order = 4;   // spline order (degree + 1); 4 = cubic
  std::vector<double> knots;  // length count + order, nondecreasing
};

// Dense evaluation of a basis on a grid: values(j, m) = B_m(t_j).
// Rows sum to one for in-domain points (partition of unity).
struct BasisMatrix {
  Eigen::MatrixXd values;  // n x M
  Eigen::VectorXd grid;    // n

  int n_points() const { return static_cast<int>(values.rows()); }
  int count() const { return static_cast<int>(values.cols()); }
};

BasisSpec make_basis(double domain_lo, double domain_hi, int count, int order = 4);

// Cox-de Boor evaluation at every grid point. Grid points must lie in
// [domain_lo, domain_hi]; at the right endpoint the last basis function
// takes value 1 by the clamped convention.
BasisMatrix eval_basis(const BasisSpec& spec, const Eigen::VectorXd& grid);

// Nonzero basis values at a single point: fills `out` (length order)
// and returns the index of the first nonzero basis function.
int eval_basis_at(const BasisSpec& spec, double t, double* out);

}  // namespace funcvb

#endif  // FUNCVB_BASIS_HPP_
