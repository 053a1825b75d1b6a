#include "minen/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "minen/error.hpp"

namespace minen {

double distance(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

void NetworkConfig::validate() const {
  if (node_count == 0) {
    throw ConfigError("node_count must be at least 1");
  }
  if (!(area_width > 0.0) || !(area_height > 0.0)) {
    throw ConfigError("area_width and area_height must be positive");
  }
  if (bs_pos.x < 0.0 || bs_pos.x > area_width || bs_pos.y < 0.0 || bs_pos.y > area_height) {
    throw ConfigError("bs_pos must lie inside the simulation area");
  }
  if (!(initial_energy > 0.0)) {
    throw ConfigError("initial_energy must be positive");
  }
  if (msg_len_range.min == 0) {
    throw ConfigError("msg_len_range.min must be positive");
  }
  if (msg_len_range.min > msg_len_range.max) {
    throw ConfigError("msg_len_range is inverted");
  }
  if (sensed_data_range.min > sensed_data_range.max) {
    throw ConfigError("sensed_data_range is inverted");
  }
  if (cluster_count && *cluster_count == 0) {
    throw ConfigError("cluster_count must be at least 1");
  }
  if (cluster_count && *cluster_count > node_count) {
    throw ConfigError("cluster_count exceeds node_count");
  }
  if (!(sensing_radius >= 0.0)) {
    throw ConfigError("sensing_radius must be non-negative");
  }
  if (coverage_grid_cells == 0) {
    throw ConfigError("coverage_grid_cells must be at least 1");
  }
}

std::size_t fraction_cluster_count(double fraction, std::size_t alive) {
  if (alive == 0) {
    return 0;
  }
  const auto k = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(alive)));
  return std::clamp<std::size_t>(k, 1, alive);
}

std::size_t NetworkConfig::effective_cluster_count(std::size_t alive) const {
  if (alive == 0) {
    return 0;
  }
  if (cluster_count) {
    return std::min(*cluster_count, alive);
  }
  return fraction_cluster_count(kDefaultHeadFraction, alive);
}

std::vector<NodeState> build_network(const NetworkConfig& config, RngStream& rng) {
  config.validate();
  std::vector<NodeState> nodes(config.node_count);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    NodeState& n = nodes[i];
    n.id = static_cast<NodeId>(i);
    n.pos = {rng.uniform(0.0, config.area_width), rng.uniform(0.0, config.area_height)};
    n.energy = config.initial_energy;
    n.initial_energy = config.initial_energy;
    n.msg_len = static_cast<std::uint32_t>(
        rng.integer(config.msg_len_range.min, config.msg_len_range.max));
    n.sensed_data = static_cast<std::uint32_t>(
        rng.integer(config.sensed_data_range.min, config.sensed_data_range.max));
    n.alive = true;
    n.awake = true;
  }
  return nodes;
}

double total_energy(std::span<const NodeState> nodes) {
  double sum = 0.0;
  for (const auto& n : nodes) {
    sum += n.energy;
  }
  return sum;
}

std::size_t alive_count(std::span<const NodeState> nodes) {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const NodeState& n) { return n.alive; }));
}

std::size_t active_count(std::span<const NodeState> nodes) {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const NodeState& n) { return n.active(); }));
}

std::size_t apply_deaths(std::span<NodeState> nodes) {
  std::size_t died = 0;
  for (auto& n : nodes) {
    if (n.alive && n.energy <= 0.0) {
      n.energy = 0.0;
      n.alive = false;
      n.awake = false;
      ++died;
    }
  }
  return died;
}

void wake_all(std::span<NodeState> nodes) {
  for (auto& n : nodes) {
    n.awake = n.alive;
  }
}

}  // namespace minen
