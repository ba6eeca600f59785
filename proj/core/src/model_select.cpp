#include "funcvb/model_select.hpp"

#include <algorithm>
#include <cmath>

#include "funcvb/errors.hpp"
#include "funcvb/expectations.hpp"
#include "funcvb/kmeans.hpp"
#include "funcvb/model1.hpp"
#include "funcvb/parallel.hpp"
#include "funcvb/rng.hpp"
#include "funcvb/special.hpp"

namespace funcvb {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

double dic(const FitResult& fit, const FunctionalDataset& data, const BasisMatrix& basis,
           const PriorConfig& priors) {
  if (!fit.converged) throw ShapeError("DIC requires a converged fit; rerun with more iterations");
  (void)priors;
  const int n_curves = data.n_curves();
  const int n = data.n_points();
  const int k = fit.state.n_clusters();
  const Eigen::MatrixXd& b = basis.values;
  const Eigen::MatrixXd& p = fit.state.resp;
  const VariationalState& s = fit.state;

  const double d_total = s.dirichlet.sum();
  double expected = 0.0;   // E_q[log p(Y, Z | pi, phi, tau)], Z via p*
  double plug_in = 0.0;    // same log-likelihood at posterior means
  for (int c = 0; c < k; ++c) {
    const double e_tau = s.shape_tau[c] / s.rate_tau[c];
    const double e_log_tau = digamma(s.shape_tau[c]) - std::log(s.rate_tau[c]);
    const double e_log_pi = digamma(s.dirichlet[c]) - digamma(d_total);
    const double log_pi_hat = std::log(s.dirichlet[c] / d_total);
    const double log_tau_hat = std::log(e_tau);
    const double trace = trace_b_sigma_bt(b, s.coef_cov[c]);
    const Eigen::VectorXd fitted = b * s.coef_mean[c];
    for (int i = 0; i < n_curves; ++i) {
      const double resid2 = (data.y.row(i).transpose() - fitted).squaredNorm();
      expected += p(i, c) * (e_log_pi + 0.5 * n * e_log_tau -
                             0.5 * e_tau * (trace + resid2) - 0.5 * n * kLog2Pi);
      plug_in += p(i, c) * (log_pi_hat + 0.5 * n * log_tau_hat - 0.5 * e_tau * resid2 -
                            0.5 * n * kLog2Pi);
    }
  }
  return -4.0 * expected + 2.0 * plug_in;
}

KScanResult k_scan(const FunctionalDataset& data, const BasisMatrix& basis,
                   const KScanOptions& options) {
  if (options.k_values.empty()) throw ShapeError("k_scan: empty K range");
  std::vector<int> ks;
  for (int k : options.k_values) {  // dedupe, order preserved
    if (std::find(ks.begin(), ks.end(), k) == ks.end()) ks.push_back(k);
  }

  const int n = data.n_points();
  const int m = basis.count();
  const Eigen::MatrixXd& b = basis.values;

  // scan prior: coefficient mean from a B-spline least-squares fit of one
  // seed-chosen curve, replicated across clusters
  const Eigen::LLT<Eigen::MatrixXd> llt(b.transpose() * b);
  Rng pick(stream_seed(options.seed, 0x6b7363616eULL));
  const int pilot_curve = static_cast<int>(pick.below(data.n_curves()));
  const Eigen::VectorXd base_coef =
      llt.solve(b.transpose() * data.y.row(pilot_curve).transpose());

  double shape = 1000.0, rate = 0.0;
  if (options.shape_tau && options.rate_tau) {
    shape = *options.shape_tau;
    rate = *options.rate_tau;
  } else {
    // informative tau prior from per-curve least-squares residuals
    double sigma2 = 0.0;
    for (int i = 0; i < data.n_curves(); ++i) {
      const Eigen::VectorXd y_i = data.y.row(i).transpose();
      const Eigen::VectorXd resid = y_i - b * llt.solve(b.transpose() * y_i);
      sigma2 += resid.squaredNorm() / (n - m);
    }
    sigma2 /= data.n_curves();
    rate = shape * sigma2;
  }

  struct Candidate {
    FitResult fit;
    bool ok = false;
    std::string error;
  };
  std::vector<std::vector<Candidate>> candidates(ks.size());
  for (auto& row : candidates) row.resize(options.fits_per_k);

  std::vector<std::pair<int, int>> jobs;
  for (std::size_t ki = 0; ki < ks.size(); ++ki) {
    for (int j = 0; j < options.fits_per_k; ++j) jobs.emplace_back(static_cast<int>(ki), j);
  }

  std::vector<PriorConfig> priors_by_k(ks.size());
  for (std::size_t ki = 0; ki < ks.size(); ++ki) {
    PriorConfig prior = PriorConfig::flat(ks[ki], m, 1.0 / options.coef_variance);
    prior.coef_mean.assign(ks[ki], base_coef);
    prior.shape_tau = shape;
    prior.rate_tau = rate;
    priors_by_k[ki] = prior;
  }

  parallel_for(static_cast<int>(jobs.size()), options.workers, [&](int idx) {
    const auto [ki, j] = jobs[idx];
    const int k = ks[ki];
    Candidate& cand = candidates[ki][j];
    try {
      KMeansOptions km;
      km.k = k;
      km.seed = stream_seed(options.seed, 0x696e6974ULL + k, static_cast<std::uint64_t>(j));
      const auto init = kmeans(data.y, km);
      FitOptions fit_options;
      fit_options.threshold = options.threshold;
      fit_options.max_iter = options.max_iter;
      fit_options.special_fn = options.special_fn;
      cand.fit = fit_model1(data, basis, priors_by_k[ki],
                            one_hot_responsibilities(init.labels, k), fit_options);
      cand.fit.seed = km.seed;
      cand.ok = true;
    } catch (const std::exception& e) {
      cand.error = e.what();
    }
  });

  KScanResult result;
  result.rows.reserve(ks.size());
  for (std::size_t ki = 0; ki < ks.size(); ++ki) {
    KScanRow row;
    row.k = ks[ki];
    const Candidate* best = nullptr;
    std::string last_error;
    for (const auto& cand : candidates[ki]) {
      if (!cand.ok) {
        last_error = cand.error;
        continue;
      }
      if (best == nullptr || cand.fit.final_elbo() > best->fit.final_elbo()) best = &cand;
    }
    if (best == nullptr) {
      row.failed = true;
      row.error = last_error.empty() ? "all fits failed" : last_error;
    } else {
      try {
        row.dic = dic(best->fit, data, basis, priors_by_k[ki]);
        row.fit = best->fit;
        row.elbo = best->fit.final_elbo();
      } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
      }
    }
    result.rows.push_back(std::move(row));
  }

  const KScanRow* best_row = nullptr;
  for (const auto& row : result.rows) {
    if (row.failed) continue;
    if (best_row == nullptr || row.dic < best_row->dic) best_row = &row;
  }
  if (best_row == nullptr) throw NumericError("every K in the scan failed", -1);
  result.best_k = best_row->k;
  return result;
}

}  // namespace funcvb
