#include "funcvb/scenarios.hpp"

#include <cmath>

#include "funcvb/errors.hpp"
#include "funcvb/rng.hpp"

namespace funcvb {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Generating coefficient tables for the basis-built scenarios (six
// cubic B-spline basis functions on [0, 1]); rows are clusters.
const double kCoefA[3][6] = {{1.5, 1.0, 1.8, 2.0, 1.0, 1.5},
                             {2.8, 1.4, 1.8, 0.5, 1.5, 2.5},
                             {0.4, 0.6, 2.4, 2.6, 0.1, 0.4}};
const double kCoefB[3][6] = {{1.5, 1.0, 1.6, 1.8, 1.0, 1.5},
                             {1.8, 0.6, 0.4, 2.6, 2.8, 1.6},
                             {1.2, 1.8, 2.2, 0.8, 0.6, 1.8}};

bool uses_coef_table(int id) { return id == 3 || id == 4 || id == 8 || id == 9 || id == 10; }

const double (*coef_table(int id))[6] { return id == 4 ? kCoefB : kCoefA; }

}  // namespace

Eigen::VectorXd ScenarioSpec::grid() const {
  return Eigen::VectorXd::LinSpaced(n_points, domain_lo, domain_hi);
}

ScenarioSpec make_scenario(int id) {
  ScenarioSpec s;
  s.id = id;
  switch (id) {
    case 1:
      s.k = 3; s.domain_hi = kPi / 3.0; s.noise_sd = 0.4;
      s.intercept = InterceptLaw::kUniform; s.intercept_scale = 0.25;
      break;
    case 2:
      s.k = 3; s.domain_hi = kPi / 3.0; s.noise_sd = 0.3;
      s.intercept = InterceptLaw::kUniform; s.intercept_scale = 0.25;
      break;
    case 3:
      s.k = 3; s.noise_sd = 0.4;
      break;
    case 4:
      s.k = 3; s.noise_sd = 0.4;
      break;
    case 5:
      s.k = 3; s.n_points = 96; s.domain_hi = 24.0; s.noise_sd = 0.012;
      s.fit_basis_count = 12;
      break;
    case 6:
      s.k = 4; s.domain_hi = kPi / 3.0; s.noise_sd = 0.4;
      s.intercept = InterceptLaw::kUniform; s.intercept_scale = 1.0 / 3.0;
      break;
    case 7:
      s.k = 3; s.domain_hi = kPi / 3.0; s.noise_sd = 0.2;
      s.intercept = InterceptLaw::kNormal; s.intercept_scale = 0.4;
      s.random_intercept_model = true;
      break;
    case 8:
      s.k = 3; s.noise_sd = 0.4;
      s.intercept = InterceptLaw::kNormal; s.intercept_scale = 0.05;
      s.random_intercept_model = true;
      break;
    case 9:
      s.k = 3; s.noise_sd = 0.15;
      s.intercept = InterceptLaw::kNormal; s.intercept_scale = 0.3;
      s.random_intercept_model = true;
      break;
    case 10:
      s.k = 3; s.noise_sd = 0.4;
      s.intercept = InterceptLaw::kNormal; s.intercept_scale = 0.6;
      s.random_intercept_model = true;
      break;
    default:
      throw DomainError("unknown scenario id: " + std::to_string(id));
  }
  return s;
}

Eigen::VectorXd true_mean(const ScenarioSpec& spec, int cluster, const Eigen::VectorXd& grid) {
  if (cluster < 0 || cluster >= spec.k) throw ShapeError("cluster index out of range");
  const int n = static_cast<int>(grid.size());
  Eigen::VectorXd f(n);

  if (uses_coef_table(spec.id)) {
    const auto table = coef_table(spec.id);
    const BasisSpec bs = make_basis(spec.domain_lo, spec.domain_hi, 6, 4);
    const BasisMatrix bm = eval_basis(bs, grid);
    Eigen::VectorXd coef(6);
    for (int m = 0; m < 6; ++m) coef[m] = table[cluster][m];
    return bm.values * coef;
  }

  switch (spec.id) {
    case 1: case 7: {
      const double b1[3] = {0.3, 1.0, 0.2};
      const double b7[3] = {-0.25, 1.25, 2.50};
      const double c[3] = {1.0 / 1.3, 1.0 / 1.2, 0.25};
      const double b = spec.id == 1 ? b1[cluster] : b7[cluster];
      for (int j = 0; j < n; ++j) {
        const double t = grid[j];
        f[j] = b + c[cluster] * std::sin(1.3 * t) + t * t * t;
      }
      return f;
    }
    case 2: {
      const double b[3] = {1.0 / 1.8, 1.0 / 1.7, 1.0 / 1.5};
      const double c[3] = {1.1, 1.4, 1.5};
      for (int j = 0; j < n; ++j) {
        const double t = grid[j];
        f[j] = b[cluster] * std::exp(c[cluster] * t) - t * t * t;
      }
      return f;
    }
    case 5: {
      for (int j = 0; j < n; ++j) {
        const double t = grid[j];
        double v = 0.0;
        switch (cluster) {
          case 0:
            v = 0.4 + std::exp(-(t - 6) * (t - 6) / 3.0) +
                0.2 * std::exp(-(t - 12) * (t - 12) / 25.0) +
                0.5 * std::exp(-(t - 19) * (t - 19) / 4.0);
            break;
          case 1:
            v = 0.2 + std::exp(-(t - 5) * (t - 5) / 4.0) +
                0.25 * std::exp(-(t - 18) * (t - 18) / 5.0);
            break;
          case 2:
            v = 0.2 + std::exp(-(t - 3) * (t - 3) / 4.0) +
                0.25 * std::exp(-(t - 16) * (t - 16) / 5.0);
            break;
        }
        f[j] = 0.1 * v;
      }
      return f;
    }
    case 6: {
      // the printed parameter list repeats b_3; the second value is the
      // fourth intercept
      const double b[4] = {0.2, 0.5, 0.7, 1.3};
      const double c[4] = {1.1, 1.4, 1.6, 1.8};
      for (int j = 0; j < n; ++j) {
        const double t = grid[j];
        f[j] = b[cluster] - std::sin(c[cluster] * kPi * t) + t * t * t;
      }
      return f;
    }
    default:
      throw DomainError("unknown scenario id: " + std::to_string(spec.id));
  }
}

SimulatedDataset generate(const ScenarioSpec& spec, std::uint64_t seed) {
  const Eigen::VectorXd grid = spec.grid();
  const int n = spec.n_points;
  const int total = spec.k * spec.curves_per_cluster;

  SimulatedDataset out;
  out.true_means.resize(spec.k, n);
  for (int k = 0; k < spec.k; ++k) out.true_means.row(k) = true_mean(spec, k, grid).transpose();

  out.data.grid = grid;
  out.data.y.resize(total, n);
  out.data.true_labels.resize(total);

  int row = 0;
  for (int k = 0; k < spec.k; ++k) {
    for (int i = 0; i < spec.curves_per_cluster; ++i, ++row) {
      // one stream per curve so per-curve parallel generation and any
      // replicate scheduling cannot change the draws
      Rng rng(stream_seed(seed, 0x736352ULL + spec.id, static_cast<std::uint64_t>(row)));
      double a = 0.0;
      if (spec.intercept == InterceptLaw::kUniform) {
        a = rng.uniform(-spec.intercept_scale, spec.intercept_scale);
      } else if (spec.intercept == InterceptLaw::kNormal) {
        a = rng.normal(0.0, spec.intercept_scale);
      }
      for (int j = 0; j < n; ++j) {
        out.data.y(row, j) = a + out.true_means(k, j) + rng.normal(0.0, spec.noise_sd);
      }
      out.data.true_labels[row] = k;
    }
  }
  return out;
}

std::vector<Eigen::VectorXd> true_basis_coefficients(const ScenarioSpec& spec,
                                                     const BasisMatrix& basis) {
  std::vector<Eigen::VectorXd> coef(spec.k);
  if (uses_coef_table(spec.id) && basis.count() == 6) {
    const auto table = coef_table(spec.id);
    for (int k = 0; k < spec.k; ++k) {
      coef[k].resize(6);
      for (int m = 0; m < 6; ++m) coef[k][m] = table[k][m];
    }
    return coef;
  }
  // closed-form means: least-squares projection onto the fitting basis
  const Eigen::MatrixXd& b = basis.values;
  const Eigen::LLT<Eigen::MatrixXd> llt(b.transpose() * b);
  for (int k = 0; k < spec.k; ++k) {
    const Eigen::VectorXd f = true_mean(spec, k, basis.grid);
    coef[k] = llt.solve(b.transpose() * f);
  }
  return coef;
}

}  // namespace funcvb
