#include <benchmark/benchmark.h>

#include <vector>

#include "gmsm/contrasts.hpp"
#include "gmsm/random.hpp"

namespace {

std::vector<double> draws(double mu, std::size_t n) {
  gmsm::RngStream rng(7, 0);
  return gmsm::sample(gmsm::MixtureParams(0.5, mu), n, rng);
}

void BM_SmThetaParts(benchmark::State& state) {
  const double mu = state.range(0) / 2.0;
  const auto ev = gmsm::ContrastEvaluator::sm(mu);
  const auto xs = draws(mu, 10000);
  std::vector<double> out(xs.size());
  for (auto _ : state) {
    ev.theta_parts(0.4, xs, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * xs.size());
}
BENCHMARK(BM_SmThetaParts)->Arg(2)->Arg(8);

// Tabulated route. Cost per point grows with the number of time slices,
// not with mu.
void BM_DdsmThetaParts(benchmark::State& state) {
  const double mu = state.range(0) / 2.0;
  const auto ev = gmsm::ContrastEvaluator::ddsm(mu, gmsm::NoiseSchedule::make(gmsm::default_horizon(mu)));
  const auto xs = draws(mu, 10000);
  std::vector<double> out(xs.size());
  for (auto _ : state) {
    ev.theta_parts(0.4, xs, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * xs.size());
}
BENCHMARK(BM_DdsmThetaParts)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);

void BM_DdsmQuadratureRoute(benchmark::State& state) {
  const auto ev = gmsm::ContrastEvaluator::ddsm(2.0, gmsm::NoiseSchedule::make(gmsm::default_horizon(2.0)),
                                                gmsm::NoisyRoute::Quadrature);
  const auto xs = draws(2.0, 100);
  std::vector<double> out(xs.size());
  for (auto _ : state) {
    ev.theta_parts(0.4, xs, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * xs.size());
}
BENCHMARK(BM_DdsmQuadratureRoute)->Unit(benchmark::kMicrosecond);

void BM_DdsmSetup(benchmark::State& state) {
  for (auto _ : state) {
    auto ev = gmsm::ContrastEvaluator::ddsm(3.0, gmsm::NoiseSchedule::make(gmsm::default_horizon(3.0)));
    benchmark::DoNotOptimize(ev);
  }
}
BENCHMARK(BM_DdsmSetup)->Unit(benchmark::kMillisecond);

}  // namespace
