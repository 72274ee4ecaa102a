#include <benchmark/benchmark.h>

#include <vector>

#include "rwpe/gaussian.hpp"
#include "rwpe/measurement_oracle.hpp"
#include "rwpe/random_stream.hpp"
#include "rwpe/walker.hpp"

namespace {

std::vector<rwpe::Datum> random_bits(std::size_t n) {
  rwpe::RandomStream rng(42);
  std::vector<rwpe::Datum> bits(n);
  for (auto& d : bits) d = rng.uniform() < 0.5 ? rwpe::Datum::Zero : rwpe::Datum::One;
  return bits;
}

void BM_UpdateOptimal(benchmark::State& state) {
  const auto bits = random_bits(64);
  rwpe::GaussianState g;
  std::size_t i = 0;
  for (auto _ : state) {
    if (i % 64 == 0) g = {0.0, 1.0};
    g = rwpe::update_optimal(g, bits[i++ % 64]);
    benchmark::DoNotOptimize(g);
  }
}
BENCHMARK(BM_UpdateOptimal);

void BM_UpdateGeneral(benchmark::State& state) {
  const rwpe::GaussianState prior{0.3, 0.7};
  const rwpe::ExperimentParams params{1.1, -0.4};
  for (auto _ : state) {
    benchmark::DoNotOptimize(rwpe::update_general(prior, rwpe::Datum::One, params));
  }
}
BENCHMARK(BM_UpdateGeneral);

// Full walker step with a simulated measurement (likelihood + one uniform draw).
void BM_StepSimulated(benchmark::State& state) {
  rwpe::WalkerConfig config;
  config.n_exp = 64;
  config.max_total_experiments = INT64_MAX;
  rwpe::SimulatedOracle oracle(0.25, 7);
  auto walker = rwpe::WalkerState::initial(config);
  for (auto _ : state) {
    if (walker.accepted_count() == config.n_exp) walker = rwpe::WalkerState::initial(config);
    rwpe::step(walker, oracle, config);
    benchmark::DoNotOptimize(walker.gaussian);
  }
}
BENCHMARK(BM_StepSimulated);

void BM_FullTrial(benchmark::State& state) {
  rwpe::WalkerConfig config;
  config.n_unwind = state.range(0);
  config.tau_check = 1.0;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    rwpe::SimulatedOracle oracle(0.4, seed++);
    benchmark::DoNotOptimize(rwpe::run(config, oracle).estimate);
  }
}
BENCHMARK(BM_FullTrial)->Arg(0)->Arg(2);

}  // namespace

BENCHMARK_MAIN();
