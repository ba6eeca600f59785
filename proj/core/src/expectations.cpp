#include "funcvb/expectations.hpp"

#include "funcvb/errors.hpp"

namespace funcvb {

double trace_b_sigma_bt(const Eigen::MatrixXd& basis, const Eigen::MatrixXd& sigma) {
  // trace(B Sigma B^T) = sum_ij B_ij (B Sigma)_ij
  return (basis.cwiseProduct(basis * sigma)).sum();
}

double expected_quadform_m1(const Eigen::VectorXd& y_i, const Eigen::MatrixXd& basis,
                            const Eigen::VectorXd& m_k, const Eigen::MatrixXd& sigma_k) {
  if (y_i.size() != basis.rows() || m_k.size() != basis.cols() ||
      sigma_k.rows() != basis.cols() || sigma_k.cols() != basis.cols()) {
    throw ShapeError("expected_quadform_m1: inconsistent dimensions");
  }
  const Eigen::VectorXd resid = y_i - basis * m_k;
  return trace_b_sigma_bt(basis, sigma_k) + resid.squaredNorm();
}

double expected_quadform_m2(const Eigen::VectorXd& y_i, const Eigen::MatrixXd& basis,
                            const Eigen::VectorXd& m_k, const Eigen::MatrixXd& sigma_k,
                            double mu_ai, double sigma2_ai) {
  if (y_i.size() != basis.rows() || m_k.size() != basis.cols() ||
      sigma_k.rows() != basis.cols() || sigma_k.cols() != basis.cols()) {
    throw ShapeError("expected_quadform_m2: inconsistent dimensions");
  }
  if (sigma2_ai < 0.0) throw ShapeError("expected_quadform_m2: sigma2_ai must be >= 0");
  const double n = static_cast<double>(y_i.size());
  const Eigen::VectorXd resid = (y_i - basis * m_k).array() - mu_ai;
  return trace_b_sigma_bt(basis, sigma_k) + n * sigma2_ai + resid.squaredNorm();
}

}  // namespace funcvb
