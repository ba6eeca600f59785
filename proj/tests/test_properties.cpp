// Property-style checks on randomized tiny instances. The heavier
// 200-instance sweeps live in the acceptance suite; these keep the same
// properties under continuous test at a smaller size.
#include <doctest.h>

#include <cmath>

#include "funcvb/basis.hpp"
#include "funcvb/kmeans.hpp"
#include "funcvb/model1.hpp"
#include "funcvb/model2.hpp"
#include "funcvb/rng.hpp"

using namespace funcvb;

namespace {

struct TinyInstance {
  FunctionalDataset data;
  BasisMatrix basis;
  PriorConfig prior;
  Eigen::MatrixXd init;
};

TinyInstance random_instance(std::uint64_t seed, bool model2_priors = false) {
  Rng rng(seed);
  const int n = 6 + (int)rng.below(6);
  const int m = 4 + (int)rng.below(3);
  const int k = 2 + (int)rng.below(2);
  const int n_curves = 6 + (int)rng.below(9);

  TinyInstance inst;
  const auto spec = make_basis(0.0, 1.0, m, 4);
  const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(n, 0.0, 1.0);
  inst.basis = eval_basis(spec, grid);
  Eigen::MatrixXd y(n_curves, n);
  for (int i = 0; i < n_curves; ++i) {
    const double shift = rng.normal();
    for (int j = 0; j < n; ++j) y(i, j) = shift + rng.normal();
  }
  inst.data = FunctionalDataset{y, grid, {}};
  inst.prior = PriorConfig::flat(k, m, 1.0);
  inst.prior.dirichlet = Eigen::VectorXd::Ones(k);
  inst.prior.shape_tau = 1.0;
  inst.prior.rate_tau = 1.0;
  if (model2_priors) {
    inst.prior.shape_tau_a = 1.0;
    inst.prior.rate_tau_a = 1.0;
  }
  for (auto& mean : inst.prior.coef_mean) {
    for (int j = 0; j < m; ++j) mean[j] = rng.normal();
  }
  inst.init.resize(n_curves, k);
  for (int i = 0; i < n_curves; ++i) {
    double total = 0.0;
    for (int c = 0; c < k; ++c) {
      inst.init(i, c) = rng.uniform() + 1e-3;
      total += inst.init(i, c);
    }
    inst.init.row(i) /= total;
  }
  return inst;
}

void check_trace_nondecreasing(const std::vector<double>& trace, double rel_tol) {
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const double slack = rel_tol * std::max(1.0, std::abs(trace[i - 1]));
    CHECK(trace[i] - trace[i - 1] >= -slack);
  }
}

}  // namespace

TEST_CASE("model 1: ELBO non-decreasing in exact mode on random instances") {
  for (int t = 0; t < 40; ++t) {
    auto inst = random_instance(1000 + t);
    FitOptions options;
    options.threshold = 0.0;
    options.max_iter = 60;
    const auto fit = fit_model1(inst.data, inst.basis, inst.prior, inst.init, options);
    check_trace_nondecreasing(fit.elbo_trace, 1e-8);
  }
}

TEST_CASE("model 2: ELBO non-decreasing in exact mode on random instances") {
  for (int t = 0; t < 40; ++t) {
    auto inst = random_instance(2000 + t, true);
    FitOptions options;
    options.threshold = 0.0;
    options.max_iter = 60;
    const auto fit = fit_model2(inst.data, inst.basis, inst.prior, inst.init, options);
    check_trace_nondecreasing(fit.elbo_trace, 1e-8);
  }
}

// The truncated tau entropy term tracks the exact one only once the
// Gamma shapes are in the asymptotic regime, so this property is pinned
// at realistic sizes (n = 100 puts A* in the thousands); on toy
// instances the truncation error alone exceeds any such tolerance.
TEST_CASE("paper-approx mode: ELBO non-decreasing within the relaxed tolerance") {
  for (int t = 0; t < 6; ++t) {
    Rng rng(3000 + t);
    const int n = 100, m = 5, k = 2, per = 25;
    const auto basis = eval_basis(make_basis(0.0, 1.0, m, 4),
                                  Eigen::VectorXd::LinSpaced(n, 0.0, 1.0));
    Eigen::MatrixXd y(2 * per, n);
    for (int i = 0; i < 2 * per; ++i) {
      const double shift = i < per ? 0.0 : 1.5;
      for (int j = 0; j < n; ++j) y(i, j) = shift + 0.4 * rng.normal();
    }
    FunctionalDataset data{y, basis.grid, {}};
    PriorConfig prior = PriorConfig::flat(k, m, 1.0);
    Eigen::MatrixXd init(2 * per, k);
    for (int i = 0; i < 2 * per; ++i) {
      const double u = 0.2 + 0.6 * rng.uniform();
      init(i, 0) = u;
      init(i, 1) = 1.0 - u;
    }
    FitOptions options;
    options.threshold = 0.0;
    options.max_iter = 40;
    options.special_fn = SpecialFn::kPaperApprox;
    const auto fit = fit_model1(data, basis, prior, init, options);
    check_trace_nondecreasing(fit.elbo_trace, 1e-4);
  }
}

TEST_CASE("responsibility rows sum to one and d* mass identity holds after fitting") {
  for (int t = 0; t < 20; ++t) {
    auto inst = random_instance(4000 + t);
    FitOptions options;
    options.threshold = 1e-6;
    options.max_iter = 80;
    const auto fit = fit_model1(inst.data, inst.basis, inst.prior, inst.init, options);
    for (int i = 0; i < inst.data.n_curves(); ++i) {
      CHECK(std::abs(fit.state.resp.row(i).sum() - 1.0) <= 1e-12);
    }
    // d* here reflects the responsibilities entering the final iteration
    CHECK(fit.state.dirichlet.sum() - inst.prior.dirichlet.sum() ==
          doctest::Approx((double)inst.data.n_curves()).epsilon(1e-12));
  }
}

TEST_CASE("all coefficient covariances stay positive definite through the fit") {
  for (int t = 0; t < 15; ++t) {
    auto inst = random_instance(5000 + t);
    FitOptions options;
    options.threshold = 0.0;
    options.max_iter = 40;
    const auto fit = fit_model1(inst.data, inst.basis, inst.prior, inst.init, options);
    for (const auto& cov : fit.state.coef_cov) {
      const Eigen::LLT<Eigen::MatrixXd> llt(cov);
      CHECK(llt.info() == Eigen::Success);
    }
  }
}

TEST_CASE("label-permutation equivariance of fits") {
  for (int t = 0; t < 10; ++t) {
    auto inst = random_instance(6000 + t);
    const int k = inst.prior.k;
    FitOptions options;
    options.threshold = 1e-8;
    options.max_iter = 100;
    const auto base = fit_model1(inst.data, inst.basis, inst.prior, inst.init, options);

    // rotate cluster labels: new column c holds old column (c+1) mod k
    std::vector<int> perm(k);
    for (int c = 0; c < k; ++c) perm[c] = (c + 1) % k;
    TinyInstance rotated = inst;
    for (int c = 0; c < k; ++c) {
      rotated.init.col(perm[c]) = inst.init.col(c);
      rotated.prior.coef_mean[perm[c]] = inst.prior.coef_mean[c];
      rotated.prior.dirichlet[perm[c]] = inst.prior.dirichlet[c];
    }
    const auto moved = fit_model1(rotated.data, rotated.basis, rotated.prior, rotated.init,
                                  options);
    REQUIRE(moved.iterations == base.iterations);
    for (int i = 0; i < inst.data.n_curves(); ++i) {
      CHECK(moved.assignments[i] == perm[base.assignments[i]]);
      for (int c = 0; c < k; ++c) {
        CHECK(moved.state.resp(i, perm[c]) ==
              doctest::Approx(base.state.resp(i, c)).epsilon(1e-9));
      }
    }
    CHECK(moved.final_elbo() == doctest::Approx(base.final_elbo()).epsilon(1e-9));
  }
}

TEST_CASE("model 2 invariants: alpha* constant, beta* >= beta0, sigma2_a bound") {
  for (int t = 0; t < 15; ++t) {
    auto inst = random_instance(7000 + t, true);
    FitOptions options;
    options.threshold = 1e-6;
    options.max_iter = 80;
    const auto fit = fit_model2(inst.data, inst.basis, inst.prior, inst.init, options);
    CHECK(fit.state.shape_tau_a ==
          doctest::Approx(inst.prior.shape_tau_a + 0.5 * inst.data.n_curves()));
    CHECK(fit.state.rate_tau_a >= inst.prior.rate_tau_a);
    const double e_tau_a = fit.state.shape_tau_a / fit.state.rate_tau_a;
    for (int i = 0; i < inst.data.n_curves(); ++i) {
      CHECK(fit.state.intercept_var[i] <= 1.0 / e_tau_a + 1e-12);
    }
  }
}

TEST_CASE("threshold zero runs exactly max_iter iterations") {
  auto inst = random_instance(8000);
  FitOptions options;
  options.threshold = 0.0;
  options.max_iter = 23;
  const auto fit = fit_model1(inst.data, inst.basis, inst.prior, inst.init, options);
  CHECK(fit.iterations == 23);
  CHECK_FALSE(fit.converged);
  CHECK(fit.elbo_trace.size() == 23);
}
