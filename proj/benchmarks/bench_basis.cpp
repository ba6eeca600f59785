#include <benchmark/benchmark.h>

#include "funcvb/basis.hpp"

using namespace funcvb;

static void BM_EvalBasis(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int m = static_cast<int>(state.range(1));
  const auto spec = make_basis(0.0, 1.0, m, 4);
  const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(n, 0.0, 1.0);
  for (auto _ : state) {
    auto basis = eval_basis(spec, grid);
    benchmark::DoNotOptimize(basis.values.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_EvalBasis)->Args({100, 6})->Args({96, 12})->Args({365, 6})->Args({1000, 20});
