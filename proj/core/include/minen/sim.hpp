#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "minen/config.hpp"
#include "minen/routing.hpp"
#include "minen/types.hpp"

namespace minen {

struct RoundMetrics {
  std::uint64_t round = 0;
  std::size_t alive = 0;
  std::size_t awake = 0;  // alive and scheduled awake during the round
  std::size_t heads = 0;
  double total_energy = 0.0;
  double energy_spent = 0.0;  // joules deducted this round
  double path_cost_total = 0.0;
};

/// Rounds-active counts per sensing cell, row-major.
struct CoverageCounts {
  std::size_t cells_per_axis = 0;
  std::vector<std::uint64_t> counts;

  std::uint64_t at(std::size_t row, std::size_t col) const {
    return counts[row * cells_per_axis + col];
  }
};

struct RunSummary {
  std::uint64_t rounds_total = 0;
  std::optional<std::uint64_t> first_death_round;
  std::optional<std::uint64_t> rounds_to_30pct_dead;
  std::optional<std::uint64_t> rounds_to_50pct_dead;
  double initial_energy = 0.0;
  std::vector<RoundMetrics> series;  // series[0] is the state before round 1
  CoverageCounts coverage;
};

/// What an observer sees for one round: node states right before the
/// protocol ran (after scheduling) and right after deaths were applied.
struct RoundObservation {
  std::uint64_t round = 0;
  std::span<const NodeState> before;
  std::span<const NodeState> after;
  const RoundOutcome* outcome = nullptr;
};

using RoundObserver = std::function<void(const RoundObservation&)>;

/// Runs rounds until no node is alive or the round cap is reached.
RunSummary run_simulation(const SimulationConfig& cfg, const RoundObserver& observer = {});

/// First round at which dead / initial >= fraction, using series[0].alive as
/// the initial population. Empty when never reached.
std::optional<std::uint64_t> percent_dead_round(std::span<const RoundMetrics> series,
                                                double fraction);

}  // namespace minen
