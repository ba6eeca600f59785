#ifndef FUNCVB_PRIORS_HPP_
#define FUNCVB_PRIORS_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "funcvb/types.hpp"

namespace funcvb {

// Coefficient-prior presets used by the simulation studies. All four fix
// the Dirichlet and tau hyperparameters at the package defaults and only
// set the coefficient mean and precision:
//   setting1: m0 = truth,                    s0 = 0.01
//   setting2: m0 = truth,                    s0 = 1
//   setting3: m0 = truth + N(0, 0.5) noise,  s0 = 0.01
//   setting4: m0 = 0,                        s0 = 0.01
enum class PriorSetting { kSetting1 = 1, kSetting2, kSetting3, kSetting4 };

PriorSetting prior_setting_from_name(const std::string& name);

// Builds a PriorConfig from a preset and the true (or projected)
// coefficient vectors, one per cluster. The seed only matters for
// setting 3's perturbation.
PriorConfig prior_preset(PriorSetting setting, const std::vector<Eigen::VectorXd>& truth,
                         std::uint64_t seed);

}  // namespace funcvb

#endif  // FUNCVB_PRIORS_HPP_
