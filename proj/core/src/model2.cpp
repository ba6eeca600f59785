#include "funcvb/model2.hpp"

#include <cmath>

#include "funcvb/errors.hpp"
#include "funcvb/expectations.hpp"
#include "funcvb/model1.hpp"
#include "funcvb/special.hpp"

namespace funcvb {
namespace model2 {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;

double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }
}  // namespace

std::pair<Eigen::MatrixXd, Eigen::VectorXd> update_sigma_m_star(
    const Eigen::VectorXd& resp_col, double e_tau, const Eigen::MatrixXd& basis,
    const Eigen::MatrixXd& y_star, double coef_precision, const Eigen::VectorXd& m0) {
  Eigen::MatrixXd sigma = model1::update_sigma_star(resp_col, e_tau, basis, coef_precision);
  Eigen::VectorXd m = model1::update_m_star(resp_col, e_tau, basis, y_star, coef_precision,
                                            m0, sigma);
  return {std::move(sigma), std::move(m)};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> update_a_posteriors(
    const Eigen::MatrixXd& y, const Eigen::MatrixXd& basis,
    const std::vector<Eigen::VectorXd>& m_star, const Eigen::MatrixXd& resp,
    const Eigen::VectorXd& e_tau, double e_tau_a) {
  if (e_tau_a <= 0.0) throw ShapeError("update_a_posteriors: E[tau_a] must be positive");
  const int n_curves = static_cast<int>(y.rows());
  const int n = static_cast<int>(y.cols());
  const int k = static_cast<int>(resp.cols());

  // 1^T (y_i - B m_k) for every (i, k)
  Eigen::MatrixXd resid_sum(n_curves, k);
  for (int c = 0; c < k; ++c) {
    const double fitted_sum = (basis * m_star[c]).sum();
    resid_sum.col(c) = y.rowwise().sum().array() - fitted_sum;
  }

  Eigen::VectorXd var(n_curves), mean(n_curves);
  for (int i = 0; i < n_curves; ++i) {
    const double precision = n * resp.row(i).dot(e_tau) + e_tau_a;
    var[i] = 1.0 / precision;
    mean[i] = var[i] * (resp.row(i).array() * e_tau.transpose().array() *
                        resid_sum.row(i).array()).sum();
  }
  return {std::move(mean), std::move(var)};
}

std::pair<double, double> update_tau_a_posterior(const Eigen::VectorXd& intercept_mean,
                                                 const Eigen::VectorXd& intercept_var,
                                                 double alpha0, double beta0, int n_curves) {
  const double alpha_star = alpha0 + 0.5 * n_curves;
  const double beta_star =
      beta0 + 0.5 * (intercept_var.array() + intercept_mean.array().square()).sum();
  return {alpha_star, beta_star};
}

double update_r_star(const Eigen::VectorXd& resp_col, double rate_tau,
                     const Eigen::VectorXd& quadform) {
  return model1::update_r_star(resp_col, rate_tau, quadform);
}

Eigen::MatrixXd update_p_star(const Eigen::MatrixXd& quad, const Eigen::VectorXd& e_tau,
                              const Eigen::VectorXd& e_log_tau,
                              const Eigen::VectorXd& e_log_pi, int n_points) {
  return model1::update_p_star(quad, e_tau, e_log_tau, e_log_pi, n_points);
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
  const double e_tau_a = state.shape_tau_a / state.rate_tau_a;
  const double e_log_tau_a = digamma(state.shape_tau_a) - std::log(state.rate_tau_a);

  // E[log p(Y | Z, phi, tau, a)] with the model-2 quadratic form
  double elogp_y = -0.5 * n_curves * n * kLog2Pi;
  for (int c = 0; c < k; ++c) {
    const double trace = trace_b_sigma_bt(b, state.coef_cov[c]);
    const Eigen::VectorXd fitted = b * state.coef_mean[c];
    for (int i = 0; i < n_curves; ++i) {
      const double quad = trace + n * state.intercept_var[i] +
                          ((y.row(i).transpose() - fitted).array() - state.intercept_mean[i])
                              .square()
                              .sum();
      elogp_y += p(i, c) * (0.5 * n * e_log_tau[c] - 0.5 * e_tau[c] * quad);
    }
  }

  double diff_z = 0.0;
  for (int i = 0; i < n_curves; ++i) {
    for (int c = 0; c < k; ++c) diff_z += p(i, c) * e_log_pi[c] - xlogx(p(i, c));
  }

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

  double diff_tau = 0.0;
  const double b0 = priors.shape_tau;
  const double r0 = priors.rate_tau;
  for (int c = 0; c < k; ++c) {
    const double a = state.shape_tau[c];
    const double r = state.rate_tau[c];
    diff_tau += b0 * std::log(r0) - std::lgamma(b0) + (b0 - 1.0) * e_log_tau[c] -
                r0 * e_tau[c];
    if (special_fn == SpecialFn::kPaperApprox) {
      diff_tau -= 0.5 * (std::log(a) + 1.0 / a);
    } else {
      diff_tau -= a * std::log(r) - std::lgamma(a) + (a - 1.0) * e_log_tau[c] - r * e_tau[c];
    }
  }

  double diff_pi = 0.0;
  double log_norm0 = std::lgamma(priors.dirichlet.sum());
  double log_norm1 = std::lgamma(d_total);
  for (int c = 0; c < k; ++c) {
    diff_pi += (priors.dirichlet[c] - state.dirichlet[c]) * e_log_pi[c];
    log_norm0 -= std::lgamma(priors.dirichlet[c]);
    log_norm1 -= std::lgamma(state.dirichlet[c]);
  }
  diff_pi += log_norm0 - log_norm1;

  // diff_a, with the E[log tau_a] and entropy terms kept so the trace
  // stays a true lower bound
  const double e_a2_sum =
      (state.intercept_var.array() + state.intercept_mean.array().square()).sum();
  double diff_a = 0.5 * n_curves * e_log_tau_a - 0.5 * e_tau_a * e_a2_sum +
                  0.5 * state.intercept_var.array().log().sum() + 0.5 * n_curves;

  double diff_tau_a = priors.shape_tau_a * std::log(priors.rate_tau_a) -
                      std::lgamma(priors.shape_tau_a) +
                      (priors.shape_tau_a - 1.0) * e_log_tau_a - priors.rate_tau_a * e_tau_a;
  diff_tau_a -= state.shape_tau_a * std::log(state.rate_tau_a) - std::lgamma(state.shape_tau_a) +
                (state.shape_tau_a - 1.0) * e_log_tau_a - state.rate_tau_a * e_tau_a;

  return elogp_y + diff_z + diff_phi + diff_tau + diff_pi + diff_a + diff_tau_a;
}

}  // namespace model2

FitResult fit_model2(const FunctionalDataset& data, const BasisMatrix& basis,
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

  const Eigen::MatrixXd& b = basis.values;
  const Eigen::MatrixXd& y = data.y;

  VariationalState state;
  state.resp = init_resp;
  state.rate_tau = Eigen::VectorXd::Constant(k, priors.rate_tau);
  state.coef_mean.assign(k, Eigen::VectorXd::Zero(m));
  state.coef_cov.assign(k, Eigen::MatrixXd::Zero(m, m));
  state.intercept_mean = Eigen::VectorXd::Zero(n_curves);
  state.intercept_var = Eigen::VectorXd::Zero(n_curves);
  state.shape_tau_a = priors.shape_tau_a + 0.5 * n_curves;  // constant over iterations
  state.rate_tau_a = priors.rate_tau_a;

  FitResult result;
  Eigen::MatrixXd quad(n_curves, k);

  for (int iter = 0; iter < options.max_iter; ++iter) {
    state.shape_tau = model1::update_a_star(state.resp, n, priors.shape_tau);

    // coefficient update on the shifted curves y* = y - mu_a 1^T
    const Eigen::MatrixXd y_star = y.colwise() - state.intercept_mean;
    Eigen::VectorXd e_tau_prev(k);
    for (int c = 0; c < k; ++c) {
      e_tau_prev[c] = state.shape_tau[c] / state.rate_tau[c];
      auto [sigma, mean] = model2::update_sigma_m_star(state.resp.col(c), e_tau_prev[c], b,
                                                       y_star, priors.coef_precision,
                                                       priors.coef_mean[c]);
      state.coef_cov[c] = std::move(sigma);
      state.coef_mean[c] = std::move(mean);
    }

    const double e_tau_a_prev = state.shape_tau_a / state.rate_tau_a;
    std::tie(state.intercept_mean, state.intercept_var) = model2::update_a_posteriors(
        y, b, state.coef_mean, state.resp, e_tau_prev, e_tau_a_prev);

    for (int c = 0; c < k; ++c) {
      const double trace = trace_b_sigma_bt(b, state.coef_cov[c]);
      const Eigen::VectorXd fitted = b * state.coef_mean[c];
      for (int i = 0; i < n_curves; ++i) {
        quad(i, c) = trace + n * state.intercept_var[i] +
                     ((y.row(i).transpose() - fitted).array() - state.intercept_mean[i])
                         .square()
                         .sum();
      }
      state.rate_tau[c] = model2::update_r_star(state.resp.col(c), priors.rate_tau, quad.col(c));
    }

    std::tie(state.shape_tau_a, state.rate_tau_a) = model2::update_tau_a_posterior(
        state.intercept_mean, state.intercept_var, priors.shape_tau_a, priors.rate_tau_a,
        n_curves);

    state.dirichlet = model1::update_d_star(state.resp, priors.dirichlet);

    Eigen::VectorXd e_tau(k), e_log_tau(k), e_log_pi(k);
    const double d_total = state.dirichlet.sum();
    for (int c = 0; c < k; ++c) {
      e_tau[c] = state.shape_tau[c] / state.rate_tau[c];
      e_log_tau[c] = digamma(state.shape_tau[c]) - std::log(state.rate_tau[c]);
      e_log_pi[c] = digamma(state.dirichlet[c]) - digamma(d_total);
    }
    state.resp = model2::update_p_star(quad, e_tau, e_log_tau, e_log_pi, n);

    const double elbo = model2::compute_elbo(y, basis, state, priors, options.special_fn);
    if (!std::isfinite(elbo)) throw NumericError("non-finite ELBO", iter);
    result.elbo_trace.push_back(elbo);
    ++result.iterations;
    if (iter > 0 &&
        std::abs(result.elbo_trace[iter] - result.elbo_trace[iter - 1]) < options.threshold) {
      result.converged = true;
      break;
    }
  }

  result.assignments.resize(n_curves);
  for (int i = 0; i < n_curves; ++i) {
    int best = 0;
    for (int c = 1; c < k; ++c) {
      if (state.resp(i, c) > state.resp(i, best)) best = c;
    }
    result.assignments[i] = best;
  }
  result.mean_curves.resize(k, n);
  for (int c = 0; c < k; ++c) result.mean_curves.row(c) = (b * state.coef_mean[c]).transpose();
  result.state = std::move(state);
  return result;
}

}  // namespace funcvb
