#include "funcvb/priors.hpp"

#include <cmath>

#include "funcvb/errors.hpp"
#include "funcvb/rng.hpp"

namespace funcvb {

PriorSetting prior_setting_from_name(const std::string& name) {
  if (name == "setting1") return PriorSetting::kSetting1;
  if (name == "setting2") return PriorSetting::kSetting2;
  if (name == "setting3") return PriorSetting::kSetting3;
  if (name == "setting4") return PriorSetting::kSetting4;
  throw DomainError("unknown prior preset: " + name);
}

PriorConfig prior_preset(PriorSetting setting, const std::vector<Eigen::VectorXd>& truth,
                         std::uint64_t seed) {
  if (truth.empty()) throw ShapeError("prior preset needs one coefficient vector per cluster");
  const int k = static_cast<int>(truth.size());
  const int m = static_cast<int>(truth.front().size());
  PriorConfig config = PriorConfig::flat(k, m);

  double s0 = 0.01;
  config.coef_mean = truth;
  switch (setting) {
    case PriorSetting::kSetting1:
      break;
    case PriorSetting::kSetting2:
      s0 = 1.0;
      break;
    case PriorSetting::kSetting3: {
      Rng rng(stream_seed(seed, 0x70726573657433ULL));
      const double sd = std::sqrt(0.5);
      for (auto& mean : config.coef_mean) {
        for (Eigen::Index j = 0; j < mean.size(); ++j) mean[j] += rng.normal(0.0, sd);
      }
      break;
    }
    case PriorSetting::kSetting4:
      for (auto& mean : config.coef_mean) mean.setZero();
      break;
  }
  config.coef_precision = 1.0 / s0;
  return config;
}

}  // namespace funcvb
