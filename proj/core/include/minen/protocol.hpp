#pragma once

#include <memory>
#include <span>

#include "minen/clustering.hpp"
#include "minen/config.hpp"
#include "minen/routing.hpp"

namespace minen {

/// One routing protocol: plans and charges a round over the current nodes.
class Protocol {
 public:
  virtual ~Protocol() = default;
  virtual ProtocolKind kind() const = 0;
  virtual RoundOutcome run_round(std::span<NodeState> nodes, RngStream& rng) = 0;
};

/// Clusters the active nodes on their features and elects heads by residual
/// energy. Empty result when no node is active.
ClusterAssignment minen_clusters(std::span<const NodeState> nodes, Position bs,
                                 std::size_t clusters, const ClusteringOptions& options,
                                 RngStream& rng);

/// Cluster, elect, build the head graph, route every head with Dijkstra and
/// charge the round.
RoundOutcome minen_round(std::span<NodeState> nodes, const SimulationConfig& cfg, RngStream& rng);

std::unique_ptr<Protocol> make_protocol(const SimulationConfig& cfg);

}  // namespace minen
