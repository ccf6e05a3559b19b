#include <benchmark/benchmark.h>

#include "gmsm/contrasts.hpp"
#include "gmsm/estimators.hpp"
#include "gmsm/random.hpp"

namespace {

gmsm::Sample make_sample(double mu, std::size_t n) {
  gmsm::RngStream rng(11, 3);
  return gmsm::Sample(gmsm::sample(gmsm::MixtureParams(0.5, mu), n, rng));
}

void run(benchmark::State& state, gmsm::ContrastKind kind) {
  const double mu = 2.0;
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto data = make_sample(mu, n);
  const auto ev = gmsm::ContrastEvaluator::make(kind, mu, gmsm::default_horizon(mu), 0.1);
  gmsm::OptimizerSpec opt;
  opt.coarse_grid = 128;
  for (auto _ : state) benchmark::DoNotOptimize(gmsm::minimize(ev, data, opt).theta_hat);
}

void BM_MinimizeMl(benchmark::State& s) { run(s, gmsm::ContrastKind::ML); }
void BM_MinimizeSm(benchmark::State& s) { run(s, gmsm::ContrastKind::SM); }
void BM_MinimizeDdsm(benchmark::State& s) { run(s, gmsm::ContrastKind::DDSM); }

BENCHMARK(BM_MinimizeMl)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MinimizeSm)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MinimizeDdsm)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_AvarSm(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(gmsm::avar_sm(0.5, 3.0));
}
BENCHMARK(BM_AvarSm)->Unit(benchmark::kMillisecond);

}  // namespace
