#include <benchmark/benchmark.h>

#include "partialreg/ols.hpp"
#include "partialreg/partial.hpp"
#include "partialreg/synthetic.hpp"

namespace {

using partialreg::GeneratedSample;
using partialreg::SimulationSpec;

GeneratedSample sample(std::size_t n, int k) {
  SimulationSpec spec;
  spec.k = k;
  spec.sigma_xx = Eigen::MatrixXd::Constant(k, k, 0.3) + 0.7 * Eigen::MatrixXd::Identity(k, k);
  spec.beta_structural = Eigen::VectorXd::LinSpaced(k, -1.0, 1.5);
  spec.sigma_eps = 0.5;
  spec.sigma_x_eps = Eigen::VectorXd::Zero(k);
  spec.n = n;
  spec.seed = 42;
  return partialreg::generate(spec);
}

void BM_FitOls(benchmark::State& state) {
  const auto s = sample(static_cast<std::size_t>(state.range(0)), static_cast<int>(state.range(1)));
  const auto names = partialreg::simulated_regressor_names(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(partialreg::fit_ols(s.data, "y", names));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_NormalEquationsOracle(benchmark::State& state) {
  const auto s = sample(static_cast<std::size_t>(state.range(0)), static_cast<int>(state.range(1)));
  const auto names = partialreg::simulated_regressor_names(static_cast<int>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(partialreg::normal_equations_oracle(s.data, "y", names));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Decompose(benchmark::State& state) {
  const auto s = sample(static_cast<std::size_t>(state.range(0)), static_cast<int>(state.range(1)));
  const auto names = partialreg::simulated_regressor_names(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(partialreg::decompose(s.data, "y", names));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Generate(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample(static_cast<std::size_t>(state.range(0)), 5));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void sizes(benchmark::internal::Benchmark* b) {
  for (int n : {100, 1000, 10000}) {
    for (int k : {2, 5, 10}) b->Args({n, k});
  }
}

}  // namespace

BENCHMARK(BM_FitOls)->Apply(sizes);
BENCHMARK(BM_NormalEquationsOracle)->Apply(sizes);
BENCHMARK(BM_Decompose)->Apply(sizes);
BENCHMARK(BM_Generate)->Arg(1000)->Arg(100000);
BENCHMARK_MAIN();
