#include <benchmark/benchmark.h>

#include "rwpe/particle_filter.hpp"

namespace {

void BM_PfUpdate(benchmark::State& state) {
  rwpe::RandomStream rng(1);
  auto cloud = rwpe::gaussian_cloud({0.0, 1.0}, static_cast<std::size_t>(state.range(0)), rng);
  const rwpe::ExperimentParams params{1.0, 0.5};
  for (auto _ : state) {
    // Alternate outcomes so the weights stay well conditioned.
    rwpe::pf_update(cloud, rwpe::Datum::Zero, params);
    rwpe::pf_update(cloud, rwpe::Datum::One, params);
    benchmark::DoNotOptimize(cloud.weights.data());
  }
  state.SetItemsProcessed(2 * state.iterations());
}
BENCHMARK(BM_PfUpdate)->Arg(800)->Arg(8000);

void BM_LiuWestResample(benchmark::State& state) {
  rwpe::RandomStream rng(2);
  const rwpe::LiuWestConfig config{0.98, 0.5, static_cast<std::size_t>(state.range(0))};
  const auto cloud = rwpe::gaussian_cloud({0.0, 1.0}, config.n_particles, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rwpe::liu_west_resample(cloud, config, rng));
  }
}
BENCHMARK(BM_LiuWestResample)->Arg(8000);

}  // namespace
