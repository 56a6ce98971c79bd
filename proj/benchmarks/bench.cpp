// Microbenchmarks for the hot paths: stream generation, marginal constants,
// the three estimators, quadrature, the constant fit, and one small sweep
// cell. Counters report draws or grid points per second where that is the
// natural unit.
#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "refprior/estimators.hpp"
#include "refprior/experiment.hpp"
#include "refprior/model.hpp"
#include "refprior/quadrature.hpp"
#include "refprior/sampling.hpp"

namespace {

using namespace refprior;

constexpr std::uint64_t kSeed = 1234;

void BM_UniformMatrix(benchmark::State& state) {
  const std::size_t m = static_cast<std::size_t>(state.range(0));
  const StreamKey key{kSeed, {0, 0, 0}};
  for (auto _ : state) {
    UniformMatrix u = uniform_matrix(key, m, 50);
    benchmark::DoNotOptimize(u.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(m) * 50);
}
BENCHMARK(BM_UniformMatrix)->Arg(50)->Arg(500);

Sample sample_for(const Model& model, double theta, std::size_t k) {
  return sample_row(model, StreamKey{kSeed, {0, 0, 0}}, 0, k, theta);
}

void BM_MarginalC(benchmark::State& state) {
  const Model model(static_cast<ModelId>(state.range(0)));
  const double theta = model.id() == ModelId::Triangular01  ? 0.4
                       : model.id() == ModelId::UnifThetaThetaSq ? 1.8
                                                                 : 2.0;
  const Sample x = sample_for(model, theta, 25);
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.log_marginal_c(x));
  }
}
BENCHMARK(BM_MarginalC)
    ->Arg(static_cast<int>(ModelId::ExpRate))
    ->Arg(static_cast<int>(ModelId::Unif0Theta))
    ->Arg(static_cast<int>(ModelId::UnifThetaThetaSq))
    ->Arg(static_cast<int>(ModelId::Triangular01));

void BM_FkHat(benchmark::State& state) {
  const Model model(ModelId::ExpRate);
  const std::size_t m = static_cast<std::size_t>(state.range(0));
  const StreamKey key{kSeed, {0, 0, 0}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(fk_hat(model, 2.0, key, m, 25).value);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(m) * 25);
}
BENCHMARK(BM_FkHat)->Arg(25)->Arg(200);

void BM_FHat(benchmark::State& state) {
  const Model model(ModelId::ExpRate);
  const StreamKey num{kSeed, {0, 0, 0}};
  const StreamKey den{kSeed, {0, 0, 1}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(f_hat(model, 2.0, 1.0, num, den, 50, 25).value);
  }
}
BENCHMARK(BM_FHat);

void BM_FnacHat(benchmark::State& state) {
  const Model model(static_cast<ModelId>(state.range(0)));
  const double theta = model.id() == ModelId::Triangular01 ? 0.4 : 2.0;
  const double theta0 = model.id() == ModelId::Triangular01 ? 0.5 : 1.0;
  const StreamKey key{kSeed, {0, 0, 0}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        fnac_hat(model, theta, theta0, key, 50, 25).value);
  }
}
BENCHMARK(BM_FnacHat)
    ->Arg(static_cast<int>(ModelId::ExpRate))
    ->Arg(static_cast<int>(ModelId::Triangular01));

void BM_LogIntegrate(benchmark::State& state) {
  // The numerically hard marginal: quadrature over (sqrt(t_k), t_1).
  const Model model(ModelId::UnifThetaThetaSq);
  const Sample x = sample_for(model, 1.8, 25);
  for (auto _ : state) {
    benchmark::DoNotOptimize(std::exp(model.log_marginal_c(x)));
  }
}
BENCHMARK(BM_LogIntegrate);

void BM_FitConstantEarp(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::vector<double> ratios(n);
  for (std::size_t i = 0; i < n; ++i)
    ratios[i] = 1.0 + 0.7 * std::sin(static_cast<double>(i));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_constant_earp(ratios).a_hat);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(n));
}
BENCHMARK(BM_FitConstantEarp)->Arg(100)->Arg(10000);

void BM_RunGridCell(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.model = ModelId::ExpRate;
  cfg.theta_grid.kind = ThetaGridSpec::Kind::Random;
  cfg.theta_grid.count = 20;
  cfg.theta_grid.low = 0.1;
  cfg.theta_grid.high = 10.0;
  cfg.k_values = {10};
  cfg.estimators = {EstimatorKind::Fk, EstimatorKind::F};
  cfg.master_seed = kSeed;
  cfg.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_grid(cfg, 10, 0).size());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * 20);
}
BENCHMARK(BM_RunGridCell);

}  // namespace

BENCHMARK_MAIN();
