#ifndef FUNCVB_MODEL2_HPP_
#define FUNCVB_MODEL2_HPP_

#include <Eigen/Dense>
#include <utility>

#include "funcvb/basis.hpp"
#include "funcvb/types.hpp"

namespace funcvb {
namespace model2 {

// Updates for the random-intercept mixture. d* and A* reuse the Model 1
// algebra (with shape b0); the coefficient update acts on the shifted
// curves y*_i = y_i - mu*_ai 1. Fit order follows Algorithm 2:
//   A* -> Sigma* -> m* -> sigma2*_a -> mu*_a -> R* -> beta* -> d* -> p* -> ELBO
// with R* = r0, mu*_a = 0, beta* = beta0 at entry and alpha* set once.

// (Sigma*_k, m*_k) with y replaced by the shifted y*.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> update_sigma_m_star(
    const Eigen::VectorXd& resp_col, double e_tau, const Eigen::MatrixXd& basis,
    const Eigen::MatrixXd& y_star, double coef_precision, const Eigen::VectorXd& m0);

// sigma2*_ai = (n sum_k p_ik E[tau_k] + E[tau_a])^{-1}
// mu*_ai     = sigma2*_ai sum_k p_ik E[tau_k] 1^T (y_i - B m*_k)
std::pair<Eigen::VectorXd, Eigen::VectorXd> update_a_posteriors(
    const Eigen::MatrixXd& y, const Eigen::MatrixXd& basis,
    const std::vector<Eigen::VectorXd>& m_star, const Eigen::MatrixXd& resp,
    const Eigen::VectorXd& e_tau, double e_tau_a);

// alpha* = alpha0 + N/2 (constant over iterations);
// beta*  = beta0 + 0.5 sum_i (sigma2*_ai + mu*_ai^2)
std::pair<double, double> update_tau_a_posterior(const Eigen::VectorXd& intercept_mean,
                                                 const Eigen::VectorXd& intercept_var,
                                                 double alpha0, double beta0, int n_curves);

// R*_k = r0 + 0.5 sum_i p_ik E||y_i - B phi_k - a_i 1||^2
double update_r_star(const Eigen::VectorXd& resp_col, double rate_tau,
                     const Eigen::VectorXd& quadform);

// Same softmax as Model 1 on the Model 2 quadratic forms.
Eigen::MatrixXd update_p_star(const Eigen::MatrixXd& quad, const Eigen::VectorXd& e_tau,
                              const Eigen::VectorXd& e_log_tau,
                              const Eigen::VectorXd& e_log_pi, int n_points);

// Seven-term ELBO; see model1::compute_elbo for the exactness and
// special-function conventions.
double compute_elbo(const Eigen::MatrixXd& y, const BasisMatrix& basis,
                    const VariationalState& state, const PriorConfig& priors,
                    SpecialFn special_fn = SpecialFn::kExact);

}  // namespace model2

FitResult fit_model2(const FunctionalDataset& data, const BasisMatrix& basis,
                     const PriorConfig& priors, const Eigen::MatrixXd& init_resp,
                     const FitOptions& options = {});

}  // namespace funcvb

#endif  // FUNCVB_MODEL2_HPP_
