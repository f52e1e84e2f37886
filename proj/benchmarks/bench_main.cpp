#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "pme/channel.hpp"
#include "pme/experiments.hpp"
#include "pme/linalg.hpp"
#include "pme/oracle.hpp"
#include "pme/trajectory.hpp"

using namespace pme;

namespace {

model::ProtocolParams params(int n, int l) {
  return model::ProtocolParams(model::khz_to_rad_per_us(100.0), 160.0 / std::sqrt(double(n)), l, n,
                               model::khz_to_rad_per_us(1.0));
}

model::DetuningSample sample(int n) { return experiments::sample_detunings(1, 0, n, model::khz_to_rad_per_us(1.0)); }

void BM_Expm2Hermitian(benchmark::State& state) {
  linalg::Mat2 h;
  h << 0.3, linalg::Complex(0.1, -0.2), linalg::Complex(0.1, 0.2), -0.7;
  for (auto _ : state) benchmark::DoNotOptimize(linalg::expm2_hermitian(h, 1.7));
}
BENCHMARK(BM_Expm2Hermitian);

void BM_OutcomeDistribution(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int l = static_cast<int>(state.range(1));
  const auto p = params(n, l);
  const auto s = sample(n);
  const std::vector<int> bits(n, 0);
  for (auto _ : state) benchmark::DoNotOptimize(channel::outcome_distribution(s, p, bits));
}
BENCHMARK(BM_OutcomeDistribution)->ArgsProduct({{1, 4}, {2, 6, 10}});

void BM_Purity(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const auto p = params(1, l);
  const auto s = sample(1);
  for (auto _ : state) benchmark::DoNotOptimize(channel::purity(s, p));
}
BENCHMARK(BM_Purity)->Arg(2)->Arg(8);

void BM_Trajectory(benchmark::State& state) {
  const auto p = params(1, static_cast<int>(state.range(0)));
  const auto s = sample(1);
  const std::vector<int> bits{0};
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(trajectory::run_trajectory(s, p, bits, ++seed));
}
BENCHMARK(BM_Trajectory)->Arg(3)->Arg(8);

void BM_FullCircuitOracle(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int l = static_cast<int>(state.range(1));
  const auto p = params(n, l);
  const auto s = sample(n);
  const std::vector<int> bits(n, 0);
  for (auto _ : state) benchmark::DoNotOptimize(oracle::simulate_full_circuit(s, p, bits));
}
BENCHMARK(BM_FullCircuitOracle)->Args({1, 4})->Args({2, 4});

}  // namespace

BENCHMARK_MAIN();
