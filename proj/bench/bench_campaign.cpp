#include <benchmark/benchmark.h>
#include <omp.h>

#include <memory>

#include "fastfpt/montecarlo.hpp"

namespace {

fastfpt::McCampaign make_campaign(fastfpt::ModelPtr model, double lambda, int workers) {
  fastfpt::McCampaign c;
  c.model = std::move(model);
  c.lambda = lambda;
  c.k_max = 3;
  c.n_trials = 20000;
  c.seed = 42;
  c.workers = workers;
  return c;
}

fastfpt::ModelPtr model_for(int id) {
  if (id == 0) return std::make_shared<fastfpt::ExponentialFixture>(1.0);
  return std::make_shared<fastfpt::HalfLineDiffusion>(1.0, 1.0);
}

// range(0): model (0 exponential, 1 half-line), range(1): lambda.
void BM_Serial(benchmark::State& state) {
  const auto c = make_campaign(model_for(static_cast<int>(state.range(0))), static_cast<double>(state.range(1)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(fastfpt::run_campaign_serial(c));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(c.n_trials));
}

void BM_OpenMP(benchmark::State& state) {
  const auto c = make_campaign(model_for(static_cast<int>(state.range(0))), static_cast<double>(state.range(1)),
                               omp_get_max_threads());
  for (auto _ : state) benchmark::DoNotOptimize(fastfpt::run_campaign(c));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(c.n_trials));
  state.counters["threads"] = c.workers;
}

}  // namespace

BENCHMARK(BM_Serial)->ArgsProduct({{0, 1}, {10, 1000}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OpenMP)->ArgsProduct({{0, 1}, {10, 1000}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
