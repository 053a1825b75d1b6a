#pragma once

#include <compare>
#include <cstdint>
#include <limits>

namespace minen {

using NodeId = std::uint32_t;

/// Sentinel vertex id for the base station in routes and traces.
inline constexpr NodeId kBaseStation = std::numeric_limits<NodeId>::max();

/// Planar position in meters.
struct Position {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

/// Euclidean distance in meters.
double distance(Position a, Position b);

struct NodeState {
  NodeId id = 0;
  Position pos;
  double energy = 0.0;          // residual energy, joules
  double initial_energy = 0.0;  // joules
  std::uint32_t msg_len = 0;    // bits generated per round
  std::uint32_t sensed_data = 0;  // bits sensed per round
  bool alive = true;
  bool awake = true;

  /// Participates in the current round (alive and not scheduled to sleep).
  bool active() const { return alive && awake; }

  /// Energy consumed so far (I - e).
  double spent() const { return initial_energy - energy; }

  friend bool operator==(const NodeState&, const NodeState&) = default;
};

}  // namespace minen
