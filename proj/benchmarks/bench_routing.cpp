#include <benchmark/benchmark.h>

#include "minen/network.hpp"
#include "minen/routing.hpp"

namespace {

void BM_PlanRoutes(benchmark::State& state) {
  minen::RngStream rng(1);
  minen::NetworkConfig nc;
  const auto nodes = minen::build_network(nc, rng);
  std::vector<minen::NodeId> heads;
  for (std::int64_t i = 0; i < state.range(0); ++i) heads.push_back(static_cast<minen::NodeId>(i * 7));
  const minen::EnergyParams p;
  for (auto _ : state) {
    const auto g = minen::build_head_graph(heads, nodes, nc.bs_pos, p, 4000);
    benchmark::DoNotOptimize(minen::plan_routes(g));
  }
}
BENCHMARK(BM_PlanRoutes)->Arg(5)->Arg(15)->Arg(40);

}  // namespace
