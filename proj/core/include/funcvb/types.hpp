#ifndef FUNCVB_TYPES_HPP_
#define FUNCVB_TYPES_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "funcvb/errors.hpp"

namespace funcvb {

// N curves observed on a shared grid of n points. Rows of `y` are curves.
// `true_labels` (0-based, empty when unknown) are carried for evaluation only.
struct FunctionalDataset {
  Eigen::MatrixXd y;        // N x n
  Eigen::VectorXd grid;     // n, strictly increasing
  std::vector<int> true_labels;

  int n_curves() const { return static_cast<int>(y.rows()); }
  int n_points() const { return static_cast<int>(y.cols()); }
  bool has_labels() const { return !true_labels.empty(); }

  void validate() const {
    if (y.rows() < 1 || y.cols() < 2) throw ShapeError("dataset needs N >= 1 curves and n >= 2 points");
    if (grid.size() != y.cols()) throw ShapeError("grid length does not match curve length");
    for (Eigen::Index j = 1; j < grid.size(); ++j) {
      if (!(grid[j] > grid[j - 1])) throw ShapeError("grid must be strictly increasing");
    }
    if (!y.allFinite()) throw ShapeError("dataset contains non-finite values");
    if (!true_labels.empty() && static_cast<Eigen::Index>(true_labels.size()) != y.rows()) {
      throw ShapeError("label count does not match curve count");
    }
  }
};

// Hyperparameters shared by both models. Gamma distributions are
// shape/rate throughout, so E[tau] = shape/rate. `shape_tau` plays the
// role of a0 under the independent-error model and b0 under the
// random-intercept model; `shape_tau_a`/`rate_tau_a` are only read by
// the latter.
struct PriorConfig {
  int k = 0;
  Eigen::VectorXd dirichlet;                  // d0, length k
  std::vector<Eigen::VectorXd> coef_mean;     // m0_k, length-M each
  double coef_precision = 100.0;              // v0 = 1/s0
  double shape_tau = 0.01;                    // a0 / b0
  double rate_tau = 0.01;                     // r0
  double shape_tau_a = 0.01;                  // alpha0
  double rate_tau_a = 0.01;                   // beta0

  void validate(int basis_count) const {
    if (k < 1) throw ShapeError("prior needs k >= 1");
    if (dirichlet.size() != k || (dirichlet.array() <= 0.0).any())
      throw ShapeError("Dirichlet prior must be length k and strictly positive");
    if (static_cast<int>(coef_mean.size()) != k) throw ShapeError("need one coefficient mean per cluster");
    for (const auto& m : coef_mean) {
      if (m.size() != basis_count) throw ShapeError("coefficient prior mean length must match basis count");
    }
    if (coef_precision <= 0 || shape_tau <= 0 || rate_tau <= 0 || shape_tau_a <= 0 || rate_tau_a <= 0)
      throw ShapeError("prior scale parameters must be strictly positive");
  }

  // d0 = 1/k, zero coefficient means; tau hyperparameters left at the
  // weak defaults.
  static PriorConfig flat(int k, int basis_count, double coef_precision = 100.0) {
    PriorConfig p;
    p.k = k;
    p.dirichlet = Eigen::VectorXd::Constant(k, 1.0 / k);
    p.coef_mean.assign(k, Eigen::VectorXd::Zero(basis_count));
    p.coef_precision = coef_precision;
    return p;
  }
};

// Which form of the tau entropy term the ELBO uses: exact digamma and
// log-gamma, or the truncated asymptotic replacement 0.5*(log A + 1/A).
enum class SpecialFn { kExact, kPaperApprox };

// All variational parameters. Intercept and tau_a fields are only
// populated by the random-intercept engine.
struct VariationalState {
  Eigen::MatrixXd resp;                       // p*, N x K, rows sum to 1
  Eigen::VectorXd dirichlet;                  // d*, length K
  std::vector<Eigen::VectorXd> coef_mean;     // m*_k
  std::vector<Eigen::MatrixXd> coef_cov;      // Sigma*_k, SPD
  Eigen::VectorXd shape_tau;                  // A*_k
  Eigen::VectorXd rate_tau;                   // R*_k
  Eigen::VectorXd intercept_mean;             // mu*_a, length N
  Eigen::VectorXd intercept_var;              // sigma2*_a, length N
  double shape_tau_a = 0.0;                   // alpha*
  double rate_tau_a = 0.0;                    // beta*

  int n_clusters() const { return static_cast<int>(resp.cols()); }
};

struct FitResult {
  std::vector<int> assignments;   // 0-based argmax responsibility, ties to lowest index
  VariationalState state;
  Eigen::MatrixXd mean_curves;    // K x n, row k = B * m*_k
  std::vector<double> elbo_trace; // one entry per iteration
  int iterations = 0;
  bool converged = false;
  std::uint64_t seed = 0;

  double final_elbo() const { return elbo_trace.empty() ? 0.0 : elbo_trace.back(); }
};

struct FitOptions {
  double threshold = 0.01;
  int max_iter = 100;
  SpecialFn special_fn = SpecialFn::kExact;
};

}  // namespace funcvb

#endif  // FUNCVB_TYPES_HPP_
