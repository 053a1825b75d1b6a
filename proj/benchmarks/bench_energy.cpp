#include <benchmark/benchmark.h>

#include "minen/energy.hpp"

namespace {

void BM_TxEnergy(benchmark::State& state) {
  const minen::EnergyParams p;
  double d = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(minen::tx_energy(p, d, 4000));
    d = d < 300 ? d + 0.37 : 1.0;
  }
}
BENCHMARK(BM_TxEnergy);

void BM_EdgeCost(benchmark::State& state) {
  const minen::EnergyParams p;
  minen::NodeState a{0, {10, 20}, 1.5, 2.0, 2000, 1000, true, true};
  minen::NodeState b{1, {90, 60}, 1.1, 2.0, 3000, 1000, true, true};
  for (auto _ : state) {
    benchmark::DoNotOptimize(minen::edge_cost(p, a, b, 4000));
  }
}
BENCHMARK(BM_EdgeCost);

}  // namespace
