#include <benchmark/benchmark.h>

#include "minen/coverage.hpp"
#include "minen/network.hpp"
#include "minen/sleepsched.hpp"

namespace {

struct Fixture {
  minen::NetworkConfig nc;
  std::vector<minen::NodeState> nodes;
  minen::CoverageMap map;
  minen::FitnessContext ctx;

  Fixture()
      : nodes(make_nodes()), map(minen::GridSpec{}, nodes), ctx(nodes, map, 0.34, 0.33) {}

  static std::vector<minen::NodeState> make_nodes() {
    minen::RngStream rng(4);
    return minen::build_network(minen::NetworkConfig{}, rng);
  }
};

void BM_Fitness(benchmark::State& state) {
  const Fixture f;
  minen::RngStream rng(5);
  const auto g = minen::random_genome(f.nodes.size(), 0.5, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.ctx(g));
  }
}
BENCHMARK(BM_Fitness);

void BM_Scheduler(benchmark::State& state) {
  const Fixture f;
  minen::SchedulerConfig cfg;
  cfg.algorithm = static_cast<minen::SchedulerAlgorithm>(state.range(0));
  minen::RngStream rng(6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(minen::run_scheduler(f.ctx, cfg, rng));
  }
  state.SetLabel(std::string(minen::to_string(cfg.algorithm)));
}
BENCHMARK(BM_Scheduler)
    ->Arg(static_cast<int>(minen::SchedulerAlgorithm::gso))
    ->Arg(static_cast<int>(minen::SchedulerAlgorithm::ga))
    ->Arg(static_cast<int>(minen::SchedulerAlgorithm::pso))
    ->Unit(benchmark::kMillisecond);

}  // namespace
