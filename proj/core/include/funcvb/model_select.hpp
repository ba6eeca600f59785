#ifndef FUNCVB_MODEL_SELECT_HPP_
#define FUNCVB_MODEL_SELECT_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "funcvb/basis.hpp"
#include "funcvb/types.hpp"

namespace funcvb {

// Deviance information criterion for a converged independent-error fit:
//   DIC = -4 E_q[log p(Y, Z | pi, phi, tau)] + 2 Dbar
// where the expectation marginalizes Z with the responsibilities and
// Dbar plugs each parameter's variational posterior mean (pi_k ->
// d*_k / sum d*, phi_k -> m*_k, tau_k -> A*_k/R*_k, log tau_k ->
// log E[tau_k]), again weighting cluster terms by p*_ik. Lower is
// better. Throws ShapeError if the fit did not converge.
double dic(const FitResult& fit, const FunctionalDataset& data, const BasisMatrix& basis,
           const PriorConfig& priors);

struct KScanOptions {
  std::vector<int> k_values;
  int fits_per_k = 5;
  std::uint64_t seed = 0;
  double threshold = 0.001;
  int max_iter = 100;
  SpecialFn special_fn = SpecialFn::kExact;
  int workers = 1;
  // Gamma prior for tau. When unset, an informative prior is derived
  // from per-curve least-squares residuals: a0 = 1000, r0 = 1000 *
  // sigma2_hat (mirrors the informative real-data settings).
  std::optional<double> shape_tau;
  std::optional<double> rate_tau;
  double coef_variance = 0.1;  // s0 for the scan prior
};

struct KScanRow {
  int k = 0;
  double dic = 0.0;
  double elbo = 0.0;
  bool failed = false;
  std::string error;
  FitResult fit;
};

struct KScanResult {
  std::vector<KScanRow> rows;  // duplicates removed, order preserved
  int best_k = 0;              // argmin DIC over non-failed rows
};

// For each K: build the scan prior (coefficient mean from a B-spline
// least-squares fit of one seed-chosen curve, replicated across
// clusters; d0 = 1/K), run `fits_per_k` k-means++-initialized fits,
// keep the max-ELBO fit, and report its DIC. Per-K failures are
// recorded without aborting the scan.
KScanResult k_scan(const FunctionalDataset& data, const BasisMatrix& basis,
                   const KScanOptions& options);

}  // namespace funcvb

#endif  // FUNCVB_MODEL_SELECT_HPP_
