#include <benchmark/benchmark.h>

#include <vector>

#include "rootcp/bench.hpp"
#include "rootcp/conformal.hpp"
#include "rootcp/interp_cp.hpp"
#include "rootcp/ridge_oracle.hpp"
#include "rootcp/root_cp.hpp"
#include "rootcp/split_cp.hpp"

namespace {

rootcp::bench::SyntheticProblem problem(int n, int p) {
  rootcp::bench::SyntheticSpec spec;
  spec.n = n;
  spec.p = p;
  spec.n_informative = p;
  spec.seed = 7;
  return rootcp::bench::generate(spec);
}

void BM_RidgeFit(benchmark::State& state) {
  const auto prob = problem(static_cast<int>(state.range(0)), 50);
  const rootcp::RegressorSpec ridge = rootcp::RidgeSpec{1.0};
  double z = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rootcp::fit(ridge, prob.data, z));
    z += 1e-3;
  }
}
BENCHMARK(BM_RidgeFit)->Arg(100)->Arg(300)->Arg(1000);

void BM_LassoFit(benchmark::State& state) {
  const auto prob = problem(300, 50);
  rootcp::LassoSpec lasso;
  lasso.lambda = 0.1 * rootcp::lasso_lambda_max(prob.data.features(), prob.data.responses());
  lasso.tol = 1e-8;
  const rootcp::RegressorSpec spec = lasso;
  for (auto _ : state) benchmark::DoNotOptimize(rootcp::fit(spec, prob.data, prob.held_out));
}
BENCHMARK(BM_LassoFit);

void BM_Typicalness(benchmark::State& state) {
  std::vector<double> scores(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = static_cast<double>((i * 7919) % 1009);
  for (auto _ : state) benchmark::DoNotOptimize(rootcp::typicalness(scores));
}
BENCHMARK(BM_Typicalness)->Arg(300)->Arg(10000);

void BM_RootCP(benchmark::State& state) {
  const auto prob = problem(static_cast<int>(state.range(0)), 50);
  const auto cfg = rootcp::ConformalConfig::for_data(prob.data, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(rootcp::conformal_interval(rootcp::RidgeSpec{1.0}, prob.data, cfg));
}
BENCHMARK(BM_RootCP)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_SplitCP(benchmark::State& state) {
  const auto prob = problem(300, 50);
  const auto cfg = rootcp::ConformalConfig::for_data(prob.data, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(rootcp::split_interval(rootcp::RidgeSpec{1.0}, prob.data, cfg));
}
BENCHMARK(BM_SplitCP);

void BM_InterpCP(benchmark::State& state) {
  const auto prob = problem(300, 50);
  const auto cfg = rootcp::ConformalConfig::for_data(prob.data, 0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rootcp::interpolated_conformal_interval(rootcp::RidgeSpec{1.0}, prob.data, cfg));
  }
}
BENCHMARK(BM_InterpCP)->Unit(benchmark::kMillisecond);

void BM_ExactRidgeSet(benchmark::State& state) {
  const auto prob = problem(static_cast<int>(state.range(0)), 50);
  for (auto _ : state) benchmark::DoNotOptimize(rootcp::exact_ridge_set(prob.data, 1.0, 0.1));
}
BENCHMARK(BM_ExactRidgeSet)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
