#include <benchmark/benchmark.h>

#include "funcvb/basis.hpp"
#include "funcvb/kmeans.hpp"
#include "funcvb/model1.hpp"
#include "funcvb/model2.hpp"
#include "funcvb/priors.hpp"
#include "funcvb/scenarios.hpp"

using namespace funcvb;

namespace {

struct Setup {
  SimulatedDataset sim;
  BasisMatrix basis;
  PriorConfig prior;
  Eigen::MatrixXd init;
};

Setup make_setup(int scenario_id) {
  Setup s;
  const auto spec = make_scenario(scenario_id);
  s.sim = generate(spec, 20240817);
  s.basis = eval_basis(
      make_basis(spec.domain_lo, spec.domain_hi, spec.fit_basis_count, 4), s.sim.data.grid);
  s.prior = prior_preset(PriorSetting::kSetting1, true_basis_coefficients(spec, s.basis), 1);
  KMeansOptions km;
  km.k = spec.k;
  km.seed = 7;
  s.init = one_hot_responsibilities(kmeans(s.sim.data.y, km).labels, spec.k);
  return s;
}

}  // namespace

static void BM_FitModel1_Scenario3(benchmark::State& state) {
  const auto s = make_setup(3);
  for (auto _ : state) {
    auto fit = fit_model1(s.sim.data, s.basis, s.prior, s.init, {});
    benchmark::DoNotOptimize(fit.elbo_trace.data());
  }
}
BENCHMARK(BM_FitModel1_Scenario3)->Unit(benchmark::kMillisecond);

static void BM_FitModel2_Scenario8(benchmark::State& state) {
  const auto s = make_setup(8);
  for (auto _ : state) {
    auto fit = fit_model2(s.sim.data, s.basis, s.prior, s.init, {});
    benchmark::DoNotOptimize(fit.elbo_trace.data());
  }
}
BENCHMARK(BM_FitModel2_Scenario8)->Unit(benchmark::kMillisecond);

static void BM_KMeansInit_Scenario3(benchmark::State& state) {
  const auto s = make_setup(3);
  KMeansOptions km;
  km.k = 3;
  km.seed = 11;
  km.restarts = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto result = kmeans(s.sim.data.y, km);
    benchmark::DoNotOptimize(result.labels.data());
  }
}
BENCHMARK(BM_KMeansInit_Scenario3)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);
