#include "minen/sim.hpp"

#include <bit>

#include "minen/coverage.hpp"
#include "minen/error.hpp"
#include "minen/network.hpp"
#include "minen/protocol.hpp"
#include "minen/sleepsched.hpp"

namespace minen {

namespace {

void apply_schedule(std::span<NodeState> nodes, const FitnessContext& ctx, const Genome& asleep) {
  const auto ids = ctx.ids();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    nodes[ids[i]].awake = asleep[i] == 0;
  }
}

void add_coverage(std::span<const NodeState> nodes, const CoverageMap& map,
                  std::vector<std::uint64_t>& scratch, std::vector<std::uint64_t>& counts) {
  std::fill(scratch.begin(), scratch.end(), 0);
  for (const auto& n : nodes) {
    if (n.active()) {
      map.accumulate(scratch, n.id);
    }
  }
  for (std::size_t w = 0; w < scratch.size(); ++w) {
    std::uint64_t bits = scratch[w];
    while (bits != 0) {
      counts[w * 64 + static_cast<std::size_t>(std::countr_zero(bits))] += 1;
      bits &= bits - 1;
    }
  }
}

}  // namespace

std::optional<std::uint64_t> percent_dead_round(std::span<const RoundMetrics> series,
                                                double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ContractError("percent_dead_round: fraction must lie in (0, 1]");
  }
  if (series.empty() || series.front().alive == 0) {
    return std::nullopt;
  }
  const double initial = static_cast<double>(series.front().alive);
  for (const auto& m : series) {
    const double dead = initial - static_cast<double>(m.alive);
    if (dead / initial >= fraction) {
      return m.round;
    }
  }
  return std::nullopt;
}

RunSummary run_simulation(const SimulationConfig& cfg, const RoundObserver& observer) {
  cfg.validate();
  const RngStream root(cfg.network.rng_seed);
  RngStream net_rng = root.fork(streams::kNetwork);
  RngStream proto_rng = root.fork(streams::kProtocol);
  RngStream sched_rng = root.fork(streams::kScheduler);

  std::vector<NodeState> nodes = build_network(cfg.network, net_rng);
  const GridSpec grid{cfg.network.area_width, cfg.network.area_height,
                      cfg.network.coverage_grid_cells, cfg.network.sensing_radius};
  const CoverageMap map(grid, nodes);
  std::unique_ptr<Protocol> protocol = make_protocol(cfg);

  RunSummary summary;
  summary.coverage.cells_per_axis = grid.cells_per_axis;
  summary.coverage.counts.assign(grid.cell_count(), 0);
  std::vector<std::uint64_t> scratch(map.words_per_node(), 0);

  summary.initial_energy = total_energy(nodes);
  summary.series.push_back({0, alive_count(nodes), active_count(nodes), 0, summary.initial_energy,
                            0.0, 0.0});

  std::vector<NodeState> before;
  std::uint64_t round = 0;
  while (alive_count(nodes) > 0 && round < cfg.round_cap) {
    ++round;
    if (cfg.scheduler.algorithm != SchedulerAlgorithm::none) {
      const FitnessContext ctx(nodes, map, cfg.scheduler.alpha, cfg.scheduler.beta,
                               cfg.scheduler.coverage_preserving);
      const ScheduleResult sched = run_scheduler(ctx, cfg.scheduler, sched_rng);
      apply_schedule(nodes, ctx, sched.best.asleep);
    }
    const std::size_t awake = active_count(nodes);
    add_coverage(nodes, map, scratch, summary.coverage.counts);

    if (observer) {
      before = nodes;
    }
    const RoundOutcome outcome = protocol->run_round(nodes, proto_rng);
    if (observer) {
      observer({round, before, nodes, &outcome});
    }
    wake_all(nodes);

    summary.series.push_back({round, alive_count(nodes), awake, outcome.heads, total_energy(nodes),
                              outcome.energy_applied, outcome.path_cost_total});
  }

  summary.rounds_total = round;
  const std::size_t initial_alive = summary.series.front().alive;
  for (const auto& m : summary.series) {
    if (m.alive < initial_alive) {
      summary.first_death_round = m.round;
      break;
    }
  }
  summary.rounds_to_30pct_dead = percent_dead_round(summary.series, 0.3);
  summary.rounds_to_50pct_dead = percent_dead_round(summary.series, 0.5);
  return summary;
}

}  // namespace minen
