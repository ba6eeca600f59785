#ifndef FUNCVB_EXPECTATIONS_HPP_
#define FUNCVB_EXPECTATIONS_HPP_

#include <Eigen/Dense>

namespace funcvb {

// E over q*(phi_k) of ||y_i - B phi_k||^2:
//   trace(B Sigma*_k B^T) + ||y_i - B m*_k||^2.
double expected_quadform_m1(const Eigen::VectorXd& y_i, const Eigen::MatrixXd& basis,
                            const Eigen::VectorXd& m_k, const Eigen::MatrixXd& sigma_k);

// E over q*(phi_k) q*(a_i) of ||y_i - B phi_k - a_i 1||^2:
//   trace(B Sigma*_k B^T) + n sigma2*_ai + ||y_i - B m*_k - mu*_ai 1||^2.
double expected_quadform_m2(const Eigen::VectorXd& y_i, const Eigen::MatrixXd& basis,
                            const Eigen::VectorXd& m_k, const Eigen::MatrixXd& sigma_k,
                            double mu_ai, double sigma2_ai);

// trace(B Sigma B^T) without forming the n x n product.
double trace_b_sigma_bt(const Eigen::MatrixXd& basis, const Eigen::MatrixXd& sigma);

}  // namespace funcvb

#endif  // FUNCVB_EXPECTATIONS_HPP_
