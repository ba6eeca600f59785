#include "funcvb/basis.hpp"

#include <algorithm>
#include <cmath>

#include "funcvb/errors.hpp"

namespace funcvb {

BasisSpec make_basis(double domain_lo, double domain_hi, int count, int order) {
  if (order < 1) throw BasisError("spline order must be >= 1");
  if (count < order) throw BasisError("basis count must be >= order");
  if (!(domain_lo < domain_hi)) throw BasisError("degenerate domain: lo must be < hi");

  BasisSpec spec;
  spec.domain_lo = domain_lo;
  spec.domain_hi = domain_hi;
  spec.count = count;
  spec.order = order;
  spec.knots.reserve(count + order);
  for (int i = 0; i < order; ++i) spec.knots.push_back(domain_lo);
  const int interior = count - order;
  for (int j = 1; j <= interior; ++j) {
    spec.knots.push_back(domain_lo + (domain_hi - domain_lo) * j / (interior + 1));
  }
  for (int i = 0; i < order; ++i) spec.knots.push_back(domain_hi);
  return spec;
}

int eval_basis_at(const BasisSpec& spec, double t, double* out) {
  const auto& knots = spec.knots;
  const int order = spec.order;
  const int m = spec.count;
  if (t < spec.domain_lo || t > spec.domain_hi)
    throw DomainError("evaluation point outside basis domain");

  // knot span: largest i with knots[i] <= t < knots[i+1]; the right
  // endpoint belongs to the last nontrivial span (clamped convention)
  int span;
  if (t >= knots[m]) {
    span = m - 1;
  } else {
    span = static_cast<int>(std::upper_bound(knots.begin() + (order - 1),
                                             knots.begin() + m + 1, t) -
                            knots.begin()) - 1;
  }

  // Cox-de Boor triangular scheme over the `order` nonzero functions
  double left[32], right[32];
  out[0] = 1.0;
  for (int j = 1; j < order; ++j) {
    left[j] = t - knots[span + 1 - j];
    right[j] = knots[span + j] - t;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double denom = right[r + 1] + left[j - r];
      const double temp = denom != 0.0 ? out[r] / denom : 0.0;
      out[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    out[j] = saved;
  }
  return span - order + 1;  // index of the first nonzero basis function
}

BasisMatrix eval_basis(const BasisSpec& spec, const Eigen::VectorXd& grid) {
  if (spec.order > 31) throw BasisError("spline order too large");
  BasisMatrix basis;
  basis.grid = grid;
  basis.values = Eigen::MatrixXd::Zero(grid.size(), spec.count);
  double vals[32];
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    const int first = eval_basis_at(spec, grid[j], vals);
    for (int r = 0; r < spec.order; ++r) {
      basis.values(j, first + r) = vals[r];
    }
  }
  return basis;
}

}  // namespace funcvb
