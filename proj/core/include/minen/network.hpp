#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "minen/rng.hpp"
#include "minen/types.hpp"

namespace minen {

struct BitRange {
  std::uint32_t min = 500;
  std::uint32_t max = 4000;
};

struct NetworkConfig {
  std::size_t node_count = 300;
  double area_width = 250.0;
  double area_height = 250.0;
  Position bs_pos{125.0, 125.0};
  double initial_energy = 2.0;
  BitRange msg_len_range{500, 4000};
  BitRange sensed_data_range{500, 4000};
  // Absent: 5% of the nodes alive at clustering time, at least one.
  std::optional<std::size_t> cluster_count;
  double sensing_radius = 25.0;
  std::size_t coverage_grid_cells = 50;
  std::uint64_t rng_seed = 1;

  /// Throws ConfigError on the first violated invariant.
  void validate() const;

  /// Cluster count to use when `alive` nodes remain (clamped to [1, alive]).
  std::size_t effective_cluster_count(std::size_t alive) const;
};

/// Default head fraction used when cluster_count is not configured.
inline constexpr double kDefaultHeadFraction = 0.05;

/// Cluster count for a head fraction applied to `alive` nodes, minimum 1.
std::size_t fraction_cluster_count(double fraction, std::size_t alive);

/// Uniformly placed, fully charged nodes. Node i has id i.
std::vector<NodeState> build_network(const NetworkConfig& config, RngStream& rng);

double total_energy(std::span<const NodeState> nodes);
std::size_t alive_count(std::span<const NodeState> nodes);
std::size_t active_count(std::span<const NodeState> nodes);

/// Marks nodes with no residual energy as dead; returns how many died.
std::size_t apply_deaths(std::span<NodeState> nodes);

/// Puts every alive node back into the awake state.
void wake_all(std::span<NodeState> nodes);

}  // namespace minen
