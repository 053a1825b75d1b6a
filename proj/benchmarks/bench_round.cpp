#include <benchmark/benchmark.h>

#include "minen/network.hpp"
#include "minen/protocol.hpp"

namespace {

// One protocol round on a fresh default network; the copy is excluded.
void BM_ProtocolRound(benchmark::State& state) {
  minen::SimulationConfig cfg;
  cfg.protocol = static_cast<minen::ProtocolKind>(state.range(0));
  minen::RngStream root(cfg.network.rng_seed);
  minen::RngStream net = root.fork(minen::streams::kNetwork);
  const auto fresh = minen::build_network(cfg.network, net);
  minen::RngStream rng = root.fork(minen::streams::kProtocol);
  auto protocol = minen::make_protocol(cfg);
  for (auto _ : state) {
    state.PauseTiming();
    auto nodes = fresh;
    state.ResumeTiming();
    benchmark::DoNotOptimize(protocol->run_round(nodes, rng));
  }
  state.SetLabel(std::string(minen::to_string(cfg.protocol)));
}
BENCHMARK(BM_ProtocolRound)
    ->Arg(static_cast<int>(minen::ProtocolKind::minen))
    ->Arg(static_cast<int>(minen::ProtocolKind::leach))
    ->Arg(static_cast<int>(minen::ProtocolKind::fcm))
    ->Unit(benchmark::kMillisecond);

}  // namespace
