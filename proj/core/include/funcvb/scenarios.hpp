#ifndef FUNCVB_SCENARIOS_HPP_
#define FUNCVB_SCENARIOS_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "funcvb/basis.hpp"
#include "funcvb/types.hpp"

namespace funcvb {

enum class InterceptLaw { kNone, kUniform, kNormal };

// Everything needed to generate one simulation scenario: grid, cluster
// mean structure, noise and intercept laws, and the basis size used when
// fitting the scenario.
struct ScenarioSpec {
  int id = 0;
  int k = 0;
  int curves_per_cluster = 50;
  int n_points = 100;
  double domain_lo = 0.0;
  double domain_hi = 1.0;
  double noise_sd = 0.0;
  InterceptLaw intercept = InterceptLaw::kNone;
  double intercept_scale = 0.0;  // half-width (uniform) or sd (normal)
  int fit_basis_count = 6;
  bool random_intercept_model = false;  // scenarios 7-10

  Eigen::VectorXd grid() const;
};

struct SimulatedDataset {
  FunctionalDataset data;       // with true_labels
  Eigen::MatrixXd true_means;   // K x n
};

// Scenario ids 1..10. Throws DomainError for anything else.
ScenarioSpec make_scenario(int id);

// Noiseless mean of cluster k (0-based) on a grid.
Eigen::VectorXd true_mean(const ScenarioSpec& spec, int cluster, const Eigen::VectorXd& grid);

// Deterministic generation: curve i draws from its own stream derived
// from (seed, i), so datasets are identical no matter how replicates or
// curves are parallelized. Draw order within a curve: intercept (when
// the scenario has one), then the n noise values in grid order.
SimulatedDataset generate(const ScenarioSpec& spec, std::uint64_t seed);

// Coefficients pairing each cluster mean with the given basis: the
// generating coefficient table where the scenario has one, otherwise the
// least-squares projection of the closed-form mean onto the basis.
std::vector<Eigen::VectorXd> true_basis_coefficients(const ScenarioSpec& spec,
                                                     const BasisMatrix& basis);

}  // namespace funcvb

#endif  // FUNCVB_SCENARIOS_HPP_
