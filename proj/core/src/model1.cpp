#include "funcvb/model1.hpp"

#include <cmath>

#include "funcvb/errors.hpp"
#include "funcvb/expectations.hpp"
#include "funcvb/special.hpp"

namespace funcvb {
namespace model1 {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;

double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }
}  // namespace

Eigen::VectorXd update_d_star(const Eigen::MatrixXd& resp, const Eigen::VectorXd& d0) {
  if (resp.cols() != d0.size()) throw ShapeError("update_d_star: K mismatch");
  return d0 + resp.colwise().sum().transpose();
}

Eigen::VectorXd update_a_star(const Eigen::MatrixXd& resp, int n_points, double shape_tau) {
  return (shape_tau + 0.5 * n_points * resp.colwise().sum().array()).transpose();
}

Eigen::MatrixXd update_sigma_star(const Eigen::VectorXd& resp_col, double e_tau,
                                  const Eigen::MatrixXd& basis, double coef_precision) {
  if (e_tau <= 0.0) throw ShapeError("update_sigma_star: E[tau] must be positive");
  const int m = static_cast<int>(basis.cols());
  const double weight = e_tau * resp_col.sum();
  Eigen::MatrixXd precision = weight * (basis.transpose() * basis);
  precision.diagonal().array() += coef_precision;
  const Eigen::LLT<Eigen::MatrixXd> llt(precision);
  if (llt.info() != Eigen::Success) throw NumericError("coefficient precision not SPD", -1);
  return llt.solve(Eigen::MatrixXd::Identity(m, m));
}

Eigen::VectorXd update_m_star(const Eigen::VectorXd& resp_col, double e_tau,
                              const Eigen::MatrixXd& basis, const Eigen::MatrixXd& y,
                              double coef_precision, const Eigen::VectorXd& m0,
                              const Eigen::MatrixXd& sigma_star) {
  if (y.rows() != resp_col.size() || y.cols() != basis.rows())
    throw ShapeError("update_m_star: inconsistent dimensions");
  // sum_i p_ik B^T y_i = B^T (Y^T p)
  const Eigen::VectorXd weighted = basis.transpose() * (y.transpose() * resp_col);
  return sigma_star * (coef_precision * m0 + e_tau * weighted);
}

double update_r_star(const Eigen::VectorXd& resp_col, double rate_tau,
                     const Eigen::VectorXd& quadform) {
  if (resp_col.size() != quadform.size()) throw ShapeError("update_r_star: length mismatch");
  return rate_tau + 0.5 * resp_col.dot(quadform);
}

Eigen::MatrixXd update_p_star(const Eigen::MatrixXd& quad, const Eigen::VectorXd& e_tau,
                              const Eigen::VectorXd& e_log_tau,
                              const Eigen::VectorXd& e_log_pi, int n_points) {
  const Eigen::Index n_curves = quad.rows();
  const Eigen::Index k = quad.cols();
  Eigen::MatrixXd resp(n_curves, k);
  for (Eigen::Index i = 0; i < n_curves; ++i) {
    Eigen::ArrayXd alpha =
        0.5 * n_points * e_log_tau.array() - 0.5 * e_tau.array() * quad.row(i).transpose().array() +
        e_log_pi.array();
    const double amax = alpha.maxCoeff();
    const Eigen::ArrayXd w = (alpha - amax).exp();
    resp.row(i) = (w / w.sum()).transpose();
  }
  return resp;
}

double compute_elbo(const Eigen::MatrixXd& y, const BasisMatrix& basis,
                    const VariationalState& state, const PriorConfig& priors,
                    SpecialFn special_fn) {
  const int n_curves = static_cast<int>(y.rows());
  const int n = static_cast<int>(y.cols());
  const int k = state.n_clusters();
  const int m = basis.count();
  const Eigen::MatrixXd& b = basis.values;
  const Eigen::MatrixXd& p = state.resp;

  Eigen::VectorXd e_tau(k), e_log_tau(k);
  for (int c = 0; c < k; ++c) {
    e_tau[c] = state.shape_tau[c] / state.rate_tau[c];
    e_log_tau[c] = digamma(state.shape_tau[c]) - std::log(state.rate_tau[c]);
  }
  const double d_total = state.dirichlet.sum();
  Eigen::VectorXd e_log_pi(k);
  for (int c = 0; c < k; ++c) e_log_pi[c] = digamma(state.dirichlet[c]) - digamma(d_total);

  // E[log p(Y | Z, phi, tau)]
  double elogp_y = -0.5 * n_curves * n * kLog2Pi;
  for (int c = 0; c < k; ++c) {
    const double trace = trace_b_sigma_bt(b, state.coef_cov[c]);
    const Eigen::VectorXd fitted = b * state.coef_mean[c];
    for (int i = 0; i < n_curves; ++i) {
      const double quad = trace + (y.row(i).transpose() - fitted).squaredNorm();
      elogp_y += p(i, c) * (0.5 * n * e_log_tau[c] - 0.5 * e_tau[c] * quad);
    }
  }

  // diff_Z: assignment cross-entropy minus entropy of q(Z)
  double diff_z = 0.0;
  for (int i = 0; i < n_curves; ++i) {
    for (int c = 0; c < k; ++c) diff_z += p(i, c) * e_log_pi[c] - xlogx(p(i, c));
  }

  // diff_phi
  double diff_phi = 0.0;
  for (int c = 0; c < k; ++c) {
    const Eigen::VectorXd dm = state.coef_mean[c] - priors.coef_mean[c];
    const Eigen::LLT<Eigen::MatrixXd> llt(state.coef_cov[c]);
    double log_det = 0.0;
    for (int j = 0; j < m; ++j) log_det += 2.0 * std::log(llt.matrixL()(j, j));
    diff_phi += 0.5 * m * std::log(priors.coef_precision) -
                0.5 * priors.coef_precision * (state.coef_cov[c].trace() + dm.squaredNorm()) +
                0.5 * log_det + 0.5 * m;
  }

  // diff_tau: Gamma prior cross-entropy minus Gamma entropy of q(tau)
  double diff_tau = 0.0;
  const double a0 = priors.shape_tau;
  const double r0 = priors.rate_tau;
  for (int c = 0; c < k; ++c) {
    const double a = state.shape_tau[c];
    const double r = state.rate_tau[c];
    diff_tau += a0 * std::log(r0) - std::lgamma(a0) + (a0 - 1.0) * e_log_tau[c] -
                r0 * e_tau[c];
    if (special_fn == SpecialFn::kPaperApprox) {
      diff_tau -= 0.5 * (std::log(a) + 1.0 / a);
    } else {
      diff_tau -= a * (std::log(r) - 1.0) - std::lgamma(a) + (a - 1.0) * e_log_tau[c];
    }
  }

  // diff_pi, including both Dirichlet normalizers (the variational one
  // changes with d*, so dropping it would break the ascent property)
  double diff_pi = 0.0;
  double log_norm0 = std::lgamma(priors.dirichlet.sum());
  double log_norm1 = std::lgamma(d_total);
  for (int c = 0; c < k; ++c) {
    diff_pi += (priors.dirichlet[c] - state.dirichlet[c]) * e_log_pi[c];
    log_norm0 -= std::lgamma(priors.dirichlet[c]);
    log_norm1 -= std::lgamma(state.dirichlet[c]);
  }
  diff_pi += log_norm0 - log_norm1;

  return elogp_y + diff_z + diff_phi + diff_tau + diff_pi;
}

}  // namespace model1

FitResult fit_model1(const FunctionalDataset& data, const BasisMatrix& basis,
                     const PriorConfig& priors, const Eigen::MatrixXd& init_resp,
                     const FitOptions& options) {
  data.validate();
  const int n_curves = data.n_curves();
  const int n = data.n_points();
  const int k = priors.k;
  const int m = basis.count();
  priors.validate(m);
  if (basis.n_points() != n) throw ShapeError("basis evaluated on a different grid");
  if (init_resp.rows() != n_curves || init_resp.cols() != k)
    throw ShapeError("init responsibilities must be N x K");
  if (((init_resp.rowwise().sum().array() - 1.0).abs() > 1e-8).any())
    throw ShapeError("init responsibility rows must sum to 1");
  if (options.threshold < 0.0) throw ShapeError("threshold must be >= 0");

  const Eigen::MatrixXd& b = basis.values;
  const Eigen::MatrixXd& y = data.y;

  VariationalState state;
  state.resp = init_resp;
  state.rate_tau = Eigen::VectorXd::Constant(k, priors.rate_tau);
  state.coef_mean.assign(k, Eigen::VectorXd::Zero(m));
  state.coef_cov.assign(k, Eigen::MatrixXd::Zero(m, m));

  FitResult result;
  Eigen::MatrixXd quad(n_curves, k);

  for (int iter = 0; iter < options.max_iter; ++iter) {
    state.shape_tau = model1::update_a_star(state.resp, n, priors.shape_tau);
    for (int c = 0; c < k; ++c) {
      const double e_tau_prev = state.shape_tau[c] / state.rate_tau[c];
      state.coef_cov[c] = model1::update_sigma_star(state.resp.col(c), e_tau_prev, b,
                                                    priors.coef_precision);
      state.coef_mean[c] = model1::update_m_star(state.resp.col(c), e_tau_prev, b, y,
                                                 priors.coef_precision, priors.coef_mean[c],
                                                 state.coef_cov[c]);
    }
    for (int c = 0; c < k; ++c) {
      const double trace = trace_b_sigma_bt(b, state.coef_cov[c]);
      const Eigen::VectorXd fitted = b * state.coef_mean[c];
      for (int i = 0; i < n_curves; ++i) {
        quad(i, c) = trace + (y.row(i).transpose() - fitted).squaredNorm();
      }
      state.rate_tau[c] = model1::update_r_star(state.resp.col(c), priors.rate_tau, quad.col(c));
    }
    state.dirichlet = model1::update_d_star(state.resp, priors.dirichlet);

    Eigen::VectorXd e_tau(k), e_log_tau(k), e_log_pi(k);
    const double d_total = state.dirichlet.sum();
    for (int c = 0; c < k; ++c) {
      e_tau[c] = state.shape_tau[c] / state.rate_tau[c];
      e_log_tau[c] = digamma(state.shape_tau[c]) - std::log(state.rate_tau[c]);
      e_log_pi[c] = digamma(state.dirichlet[c]) - digamma(d_total);
    }
    state.resp = model1::update_p_star(quad, e_tau, e_log_tau, e_log_pi, n);

    const double elbo = model1::compute_elbo(y, basis, state, priors, options.special_fn);
    if (!std::isfinite(elbo)) throw NumericError("non-finite ELBO", iter);
    result.elbo_trace.push_back(elbo);
    ++result.iterations;
    if (iter > 0) {
      const double diff = result.elbo_trace[iter] - result.elbo_trace[iter - 1];
      // threshold 0 therefore always runs to max_iter
      if (std::abs(diff) < options.threshold) {
        result.converged = true;
        break;
      }
    }
  }

  result.assignments.resize(n_curves);
  for (int i = 0; i < n_curves; ++i) {
    int best = 0;
    for (int c = 1; c < k; ++c) {
      if (state.resp(i, c) > state.resp(i, best)) best = c;  // ties stay at lowest index
    }
    result.assignments[i] = best;
  }
  result.mean_curves.resize(k, n);
  for (int c = 0; c < k; ++c) result.mean_curves.row(c) = (b * state.coef_mean[c]).transpose();
  result.state = std::move(state);
  return result;
}

}  // namespace funcvb
