// Independent reference implementations used only by tests. These are
// deliberately naive transcriptions (scalar loops, direct recursions,
// generic inverses) kept separate from the optimized library paths they
// check.
#ifndef FUNCVB_TESTS_ORACLES_HPP_
#define FUNCVB_TESTS_ORACLES_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "funcvb/rng.hpp"
#include "funcvb/types.hpp"

namespace oracle {

// ------------------------------------------------------------ B-splines

// Textbook Cox-de Boor recursion, one basis function at a time.
inline double cox_de_boor(const std::vector<double>& knots, int m, int order, double t,
                          double domain_hi) {
  if (order == 1) {
    // half-open spans; the right domain endpoint closes the last span
    const bool last = knots[m + 1] >= domain_hi;
    if (last && t == domain_hi) return knots[m] < knots[m + 1] ? 1.0 : 0.0;
    return (knots[m] <= t && t < knots[m + 1]) ? 1.0 : 0.0;
  }
  double left = 0.0, right = 0.0;
  const double dl = knots[m + order - 1] - knots[m];
  if (dl > 0.0) left = (t - knots[m]) / dl * cox_de_boor(knots, m, order - 1, t, domain_hi);
  const double dr = knots[m + order] - knots[m + 1];
  if (dr > 0.0) {
    right = (knots[m + order] - t) / dr * cox_de_boor(knots, m + 1, order - 1, t, domain_hi);
  }
  return left + right;
}

// ------------------------------------------------------ special functions

// digamma as the derivative of std::lgamma: Richardson-extrapolated
// central differences, independent of the library's shifted asymptotic
// series. Small arguments are lifted with the exact recurrence
// psi(x) = psi(x+1) - 1/x so the difference quotient stays well
// conditioned. Accurate to ~1e-12 relative.
inline double digamma_series(double x) {
  double shift = 0.0;
  while (x < 4.0) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  // step grows with sqrt(x): lgamma's magnitude makes cancellation the
  // binding error at large arguments, truncation at small ones
  const double h = std::min(std::max(1e-3, 1e-3 * std::sqrt(x)), 0.5 * x);
  auto central = [&](double step) {
    return shift + (std::lgamma(x + step) - std::lgamma(x - step)) / (2.0 * step);
  };
  const double d1 = central(h);
  const double d2 = central(h / 2.0);
  const double d3 = central(h / 4.0);
  // two Richardson levels: O(h^6) truncation
  const double r1 = (4.0 * d2 - d1) / 3.0;
  const double r2 = (4.0 * d3 - d2) / 3.0;
  return (16.0 * r2 - r1) / 15.0;
}

// ---------------------------------------------------------- Monte Carlo

// Mean and standard error of ||y - B phi - a 1||^2 over draws
// phi ~ MVN(m, Sigma), a ~ N(mu_a, sigma2_a) (set sigma2_a = 0 and
// mu_a = 0 for the independent-error form).
struct McEstimate {
  double mean = 0.0;
  double se = 0.0;
};

inline McEstimate mc_quadform(const Eigen::VectorXd& y, const Eigen::MatrixXd& basis,
                              const Eigen::VectorXd& m, const Eigen::MatrixXd& sigma,
                              double mu_a, double sigma2_a, int draws, std::uint64_t seed) {
  const Eigen::MatrixXd chol = Eigen::LLT<Eigen::MatrixXd>(
                                   sigma + 1e-300 * Eigen::MatrixXd::Identity(m.size(), m.size()))
                                   .matrixL();
  funcvb::Rng rng(seed);
  double sum = 0.0, sumsq = 0.0;
  Eigen::VectorXd z(m.size());
  for (int d = 0; d < draws; ++d) {
    for (Eigen::Index j = 0; j < z.size(); ++j) z[j] = rng.normal();
    const Eigen::VectorXd phi = m + chol * z;
    const double a = mu_a + std::sqrt(sigma2_a) * rng.normal();
    const double v = ((y - basis * phi).array() - a).square().sum();
    sum += v;
    sumsq += v * v;
  }
  McEstimate est;
  est.mean = sum / draws;
  est.se = std::sqrt((sumsq / draws - est.mean * est.mean) / draws);
  return est;
}

// -------------------------------------------- straight-line ELBO, model 1

// Term-by-term transcription of the five-term decomposition with exact
// special functions. Scalar loops throughout; generic inverse/determinant.
inline double elbo_m1(const Eigen::MatrixXd& y, const Eigen::MatrixXd& b,
                      const funcvb::VariationalState& s, const funcvb::PriorConfig& prior) {
  const int n_curves = (int)y.rows(), n = (int)y.cols(), k = (int)s.resp.cols();
  const int m = (int)b.cols();
  const double log2pi = std::log(2.0 * M_PI);

  std::vector<double> e_tau(k), e_log_tau(k), e_log_pi(k);
  double d_sum = 0.0;
  for (int c = 0; c < k; ++c) d_sum += s.dirichlet[c];
  for (int c = 0; c < k; ++c) {
    e_tau[c] = s.shape_tau[c] / s.rate_tau[c];
    e_log_tau[c] = digamma_series(s.shape_tau[c]) - std::log(s.rate_tau[c]);
    e_log_pi[c] = digamma_series(s.dirichlet[c]) - digamma_series(d_sum);
  }

  double elogp_y = 0.0;
  for (int i = 0; i < n_curves; ++i) {
    for (int c = 0; c < k; ++c) {
      double trace = 0.0;
      const Eigen::MatrixXd bsb = b * s.coef_cov[c] * b.transpose();
      for (int j = 0; j < n; ++j) trace += bsb(j, j);
      double resid2 = 0.0;
      for (int j = 0; j < n; ++j) {
        double fit = 0.0;
        for (int l = 0; l < m; ++l) fit += b(j, l) * s.coef_mean[c][l];
        resid2 += (y(i, j) - fit) * (y(i, j) - fit);
      }
      elogp_y += s.resp(i, c) * (0.5 * n * e_log_tau[c] - 0.5 * e_tau[c] * (trace + resid2) -
                                 0.5 * n * log2pi);
    }
  }

  double diff_z = 0.0;
  for (int i = 0; i < n_curves; ++i) {
    for (int c = 0; c < k; ++c) {
      diff_z += s.resp(i, c) * e_log_pi[c];
      if (s.resp(i, c) > 0.0) diff_z -= s.resp(i, c) * std::log(s.resp(i, c));
    }
  }

  double diff_phi = 0.0;
  for (int c = 0; c < k; ++c) {
    double trace = 0.0, norm2 = 0.0;
    for (int l = 0; l < m; ++l) {
      trace += s.coef_cov[c](l, l);
      const double d = s.coef_mean[c][l] - prior.coef_mean[c][l];
      norm2 += d * d;
    }
    diff_phi += 0.5 * m * std::log(prior.coef_precision) -
                0.5 * prior.coef_precision * (trace + norm2) +
                0.5 * std::log(s.coef_cov[c].determinant()) + 0.5 * m;
  }

  double diff_tau = 0.0;
  for (int c = 0; c < k; ++c) {
    diff_tau += prior.shape_tau * std::log(prior.rate_tau) - std::lgamma(prior.shape_tau) +
                (prior.shape_tau - 1.0) * e_log_tau[c] - prior.rate_tau * e_tau[c];
    diff_tau -= s.shape_tau[c] * (std::log(s.rate_tau[c]) - 1.0) - std::lgamma(s.shape_tau[c]) +
                (s.shape_tau[c] - 1.0) * e_log_tau[c];
  }

  double diff_pi = std::lgamma(prior.dirichlet.sum()) - std::lgamma(d_sum);
  for (int c = 0; c < k; ++c) {
    diff_pi += (prior.dirichlet[c] - s.dirichlet[c]) * e_log_pi[c];
    diff_pi -= std::lgamma(prior.dirichlet[c]);
    diff_pi += std::lgamma(s.dirichlet[c]);
  }

  return elogp_y + diff_z + diff_phi + diff_tau + diff_pi;
}

// -------------------------------------------- straight-line ELBO, model 2

inline double elbo_m2(const Eigen::MatrixXd& y, const Eigen::MatrixXd& b,
                      const funcvb::VariationalState& s, const funcvb::PriorConfig& prior) {
  const int n_curves = (int)y.rows(), n = (int)y.cols(), k = (int)s.resp.cols();
  const int m = (int)b.cols();
  const double log2pi = std::log(2.0 * M_PI);

  std::vector<double> e_tau(k), e_log_tau(k), e_log_pi(k);
  double d_sum = 0.0;
  for (int c = 0; c < k; ++c) d_sum += s.dirichlet[c];
  for (int c = 0; c < k; ++c) {
    e_tau[c] = s.shape_tau[c] / s.rate_tau[c];
    e_log_tau[c] = digamma_series(s.shape_tau[c]) - std::log(s.rate_tau[c]);
    e_log_pi[c] = digamma_series(s.dirichlet[c]) - digamma_series(d_sum);
  }
  const double e_tau_a = s.shape_tau_a / s.rate_tau_a;
  const double e_log_tau_a = digamma_series(s.shape_tau_a) - std::log(s.rate_tau_a);

  double elogp_y = 0.0;
  for (int i = 0; i < n_curves; ++i) {
    for (int c = 0; c < k; ++c) {
      const Eigen::MatrixXd bsb = b * s.coef_cov[c] * b.transpose();
      double trace = 0.0;
      for (int j = 0; j < n; ++j) trace += bsb(j, j);
      double resid2 = 0.0;
      for (int j = 0; j < n; ++j) {
        double fit = 0.0;
        for (int l = 0; l < m; ++l) fit += b(j, l) * s.coef_mean[c][l];
        const double r = y(i, j) - fit - s.intercept_mean[i];
        resid2 += r * r;
      }
      const double quad = trace + n * s.intercept_var[i] + resid2;
      elogp_y += s.resp(i, c) *
                 (0.5 * n * e_log_tau[c] - 0.5 * e_tau[c] * quad - 0.5 * n * log2pi);
    }
  }

  double diff_z = 0.0;
  for (int i = 0; i < n_curves; ++i) {
    for (int c = 0; c < k; ++c) {
      diff_z += s.resp(i, c) * e_log_pi[c];
      if (s.resp(i, c) > 0.0) diff_z -= s.resp(i, c) * std::log(s.resp(i, c));
    }
  }

  double diff_phi = 0.0;
  for (int c = 0; c < k; ++c) {
    double trace = 0.0, norm2 = 0.0;
    for (int l = 0; l < m; ++l) {
      trace += s.coef_cov[c](l, l);
      const double d = s.coef_mean[c][l] - prior.coef_mean[c][l];
      norm2 += d * d;
    }
    diff_phi += 0.5 * m * std::log(prior.coef_precision) -
                0.5 * prior.coef_precision * (trace + norm2) +
                0.5 * std::log(s.coef_cov[c].determinant()) + 0.5 * m;
  }

  double diff_tau = 0.0;
  for (int c = 0; c < k; ++c) {
    diff_tau += prior.shape_tau * std::log(prior.rate_tau) - std::lgamma(prior.shape_tau) +
                (prior.shape_tau - 1.0) * e_log_tau[c] - prior.rate_tau * e_tau[c];
    diff_tau -= s.shape_tau[c] * std::log(s.rate_tau[c]) - std::lgamma(s.shape_tau[c]) +
                (s.shape_tau[c] - 1.0) * e_log_tau[c] - s.rate_tau[c] * e_tau[c];
  }

  double diff_pi = std::lgamma(prior.dirichlet.sum()) - std::lgamma(d_sum);
  for (int c = 0; c < k; ++c) {
    diff_pi += (prior.dirichlet[c] - s.dirichlet[c]) * e_log_pi[c];
    diff_pi -= std::lgamma(prior.dirichlet[c]);
    diff_pi += std::lgamma(s.dirichlet[c]);
  }

  double diff_a = 0.5 * n_curves * e_log_tau_a + 0.5 * n_curves;
  for (int i = 0; i < n_curves; ++i) {
    const double e_a2 = s.intercept_var[i] + s.intercept_mean[i] * s.intercept_mean[i];
    diff_a += -0.5 * e_tau_a * e_a2 + std::log(std::sqrt(s.intercept_var[i]));
  }

  double diff_tau_a = prior.shape_tau_a * std::log(prior.rate_tau_a) -
                      std::lgamma(prior.shape_tau_a) +
                      (prior.shape_tau_a - 1.0) * e_log_tau_a - prior.rate_tau_a * e_tau_a;
  diff_tau_a -= s.shape_tau_a * std::log(s.rate_tau_a) - std::lgamma(s.shape_tau_a) +
                (s.shape_tau_a - 1.0) * e_log_tau_a - s.rate_tau_a * e_tau_a;

  return elogp_y + diff_z + diff_phi + diff_tau + diff_pi + diff_a + diff_tau_a;
}

// --------------------------------------------------- straight-line DIC

inline double dic_m1(const Eigen::MatrixXd& y, const Eigen::MatrixXd& b,
                     const funcvb::VariationalState& s) {
  const int n_curves = (int)y.rows(), n = (int)y.cols(), k = (int)s.resp.cols();
  const int m = (int)b.cols();
  const double log2pi = std::log(2.0 * M_PI);
  double d_sum = 0.0;
  for (int c = 0; c < k; ++c) d_sum += s.dirichlet[c];

  double expected = 0.0, plug = 0.0;
  for (int i = 0; i < n_curves; ++i) {
    for (int c = 0; c < k; ++c) {
      const double e_tau = s.shape_tau[c] / s.rate_tau[c];
      const double e_log_tau = digamma_series(s.shape_tau[c]) - std::log(s.rate_tau[c]);
      const double e_log_pi = digamma_series(s.dirichlet[c]) - digamma_series(d_sum);
      const Eigen::MatrixXd bsb = b * s.coef_cov[c] * b.transpose();
      double trace = 0.0;
      for (int j = 0; j < n; ++j) trace += bsb(j, j);
      double resid2 = 0.0;
      for (int j = 0; j < n; ++j) {
        double fit = 0.0;
        for (int l = 0; l < m; ++l) fit += b(j, l) * s.coef_mean[c][l];
        resid2 += (y(i, j) - fit) * (y(i, j) - fit);
      }
      expected += s.resp(i, c) * (e_log_pi + 0.5 * n * e_log_tau -
                                  0.5 * e_tau * (trace + resid2) - 0.5 * n * log2pi);
      plug += s.resp(i, c) * (std::log(s.dirichlet[c] / d_sum) + 0.5 * n * std::log(e_tau) -
                              0.5 * e_tau * resid2 - 0.5 * n * log2pi);
    }
  }
  return -4.0 * expected + 2.0 * plug;
}

// random variational state with valid shapes, for transcription tests
inline funcvb::VariationalState random_state(int n_curves, int n, int m, int k,
                                             funcvb::Rng& rng) {
  funcvb::VariationalState s;
  s.resp.resize(n_curves, k);
  for (int i = 0; i < n_curves; ++i) {
    double total = 0.0;
    for (int c = 0; c < k; ++c) {
      s.resp(i, c) = rng.uniform() + 1e-3;
      total += s.resp(i, c);
    }
    for (int c = 0; c < k; ++c) s.resp(i, c) /= total;
  }
  s.dirichlet.resize(k);
  s.shape_tau.resize(k);
  s.rate_tau.resize(k);
  for (int c = 0; c < k; ++c) {
    s.dirichlet[c] = 0.5 + 5.0 * rng.uniform();
    s.shape_tau[c] = 1.0 + 10.0 * rng.uniform();
    s.rate_tau[c] = 0.5 + 5.0 * rng.uniform();
  }
  for (int c = 0; c < k; ++c) {
    Eigen::MatrixXd a(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) a(i, j) = rng.normal();
    }
    s.coef_cov.push_back(a * a.transpose() + 0.5 * Eigen::MatrixXd::Identity(m, m));
    Eigen::VectorXd mean(m);
    for (int j = 0; j < m; ++j) mean[j] = rng.normal();
    s.coef_mean.push_back(mean);
  }
  s.intercept_mean.resize(n_curves);
  s.intercept_var.resize(n_curves);
  for (int i = 0; i < n_curves; ++i) {
    s.intercept_mean[i] = 0.3 * rng.normal();
    s.intercept_var[i] = 0.05 + rng.uniform();
  }
  s.shape_tau_a = 1.0 + 4.0 * rng.uniform();
  s.rate_tau_a = 0.5 + 2.0 * rng.uniform();
  (void)n;
  return s;
}

}  // namespace oracle

#endif  // FUNCVB_TESTS_ORACLES_HPP_
