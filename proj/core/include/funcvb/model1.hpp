#ifndef FUNCVB_MODEL1_HPP_
#define FUNCVB_MODEL1_HPP_

#include <Eigen/Dense>
#include <cstdint>

#include "funcvb/basis.hpp"
#include "funcvb/types.hpp"

namespace funcvb {
namespace model1 {

// Coordinate-ascent updates for the independent-error mixture. Each
// function is a pure transcription of one conjugate update; the fit
// driver below applies them in the fixed order
//   A* -> Sigma* -> m* -> R* -> d* -> p* -> ELBO
// with R* initialized to r0 and p* from the caller.

// d*_k = d0_k + sum_i p_ik
Eigen::VectorXd update_d_star(const Eigen::MatrixXd& resp, const Eigen::VectorXd& d0);

// A*_k = a0 + (n/2) sum_i p_ik
Eigen::VectorXd update_a_star(const Eigen::MatrixXd& resp, int n_points, double shape_tau);

// Sigma*_k = [v0 I + E[tau_k] (sum_i p_ik) B^T B]^{-1}, via LLT of the SPD precision
Eigen::MatrixXd update_sigma_star(const Eigen::VectorXd& resp_col, double e_tau,
                                  const Eigen::MatrixXd& basis, double coef_precision);

// m*_k = Sigma*_k (v0 m0_k + E[tau_k] sum_i p_ik B^T y_i)
Eigen::VectorXd update_m_star(const Eigen::VectorXd& resp_col, double e_tau,
                              const Eigen::MatrixXd& basis, const Eigen::MatrixXd& y,
                              double coef_precision, const Eigen::VectorXd& m0,
                              const Eigen::MatrixXd& sigma_star);

// R*_k = r0 + 0.5 sum_i p_ik E||y_i - B phi_k||^2
double update_r_star(const Eigen::VectorXd& resp_col, double rate_tau,
                     const Eigen::VectorXd& quadform);

// Responsibilities from alpha_ik = (n/2) E[log tau_k] - 0.5 E[tau_k] quad_ik
// + E[log pi_k], normalized row-wise with max subtraction. `quad` is the
// N x K matrix of expected quadratic forms.
Eigen::MatrixXd update_p_star(const Eigen::MatrixXd& quad, const Eigen::VectorXd& e_tau,
                              const Eigen::VectorXd& e_log_tau,
                              const Eigen::VectorXd& e_log_pi, int n_points);

// ELBO for the current state. Every parameter-dependent term is computed
// exactly, including the Dirichlet normalizers of the prior and the
// variational factor and the Gaussian 2*pi constants, so the trace is
// non-decreasing under exact special functions. With
// SpecialFn::kPaperApprox the tau entropy bracket is replaced by
// 0.5*(log A*_k + 1/A*_k).
double compute_elbo(const Eigen::MatrixXd& y, const BasisMatrix& basis,
                    const VariationalState& state, const PriorConfig& priors,
                    SpecialFn special_fn = SpecialFn::kExact);

}  // namespace model1

// Runs the coordinate ascent until the ELBO difference drops below
// `threshold` or `max_iter` iterations. `init_resp` must have normalized
// rows. Throws NumericError if the ELBO becomes non-finite.
FitResult fit_model1(const FunctionalDataset& data, const BasisMatrix& basis,
                     const PriorConfig& priors, const Eigen::MatrixXd& init_resp,
                     const FitOptions& options = {});

}  // namespace funcvb

#endif  // FUNCVB_MODEL1_HPP_
