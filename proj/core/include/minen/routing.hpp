#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "minen/clustering.hpp"
#include "minen/energy.hpp"
#include "minen/types.hpp"

namespace minen {

struct HeadEdge {
  EdgeCost cost;
  double message_bits = 0.0;
};

/// Directed graph over cluster heads plus one base-station vertex. Head
/// vertices are ordered by ascending node id; the base station is the last
/// vertex. Nothing leaves the base station.
class HeadGraph {
 public:
  explicit HeadGraph(std::vector<NodeId> heads);

  std::size_t vertex_count() const { return heads_.size() + 1; }
  std::size_t head_count() const { return heads_.size(); }
  std::size_t base_vertex() const { return heads_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  std::span<const NodeId> heads() const { return heads_; }

  /// Node id of a vertex; kBaseStation for the base vertex.
  NodeId node_of(std::size_t vertex) const;
  /// Vertex of a head id; throws ContractError if absent.
  std::size_t vertex_of(NodeId id) const;

  /// Throws ContractError for self loops, edges out of the base station, or
  /// negative costs.
  void set_edge(std::size_t from, std::size_t to, const HeadEdge& edge);
  const HeadEdge* edge(std::size_t from, std::size_t to) const;

 private:
  std::vector<NodeId> heads_;
  std::vector<std::optional<HeadEdge>> edges_;  // row-major, vertex_count^2
  std::size_t edge_count_ = 0;
};

/// Complete digraph over `heads`: head->head edges use edge_cost with the
/// transmitter's aggregated length, head->BS edges use bs_edge_cost.
HeadGraph build_head_graph(std::span<const NodeId> heads, std::span<const NodeState> nodes,
                           Position bs, const EnergyParams& params, double aggregated_bits);

/// Path from a head to the base station, as node ids ending in kBaseStation.
struct Route {
  std::vector<NodeId> path;
  double cost = 0.0;

  std::size_t hops() const { return path.empty() ? 0 : path.size() - 1; }
};

/// Minimum-cost route from `source` to the base station. Equal costs prefer
/// fewer hops, then the lexicographically smallest vertex sequence. Costs
/// accumulate from the source along the path. Throws InternalError if the
/// base station is unreachable.
Route dijkstra(const HeadGraph& graph, NodeId source);

/// One route per head, in head order.
struct RoutePlan {
  std::vector<Route> routes;

  const Route* route_for(NodeId head) const;
  double total_cost() const;
};

RoutePlan plan_routes(const HeadGraph& graph);

/// Every head sends straight to the base station (single hop).
RoutePlan direct_routes(std::span<const NodeId> heads, std::span<const NodeState> nodes,
                        Position bs, const EnergyParams& params, double aggregated_bits);

/// What one round cost the network.
struct RoundOutcome {
  double energy_applied = 0.0;    // joules actually deducted
  double energy_requested = 0.0;  // joules charged before clamping at zero
  std::size_t charges = 0;
  std::size_t heads = 0;
  std::size_t members = 0;  // active non-head nodes that transmitted
  std::size_t deaths = 0;
  double path_cost_total = 0.0;
  RoutePlan plan;
};

/// Charges one round of traffic and then applies deaths:
///  1. each active non-head member pays tx(distance to head, msg_len) and
///     its head pays rx(msg_len);
///  2. each head sends one aggregated message of `aggregated_bits` along its
///     route: every hop charges tx to the sender and rx to the receiving
///     head; the base station is free.
/// Energies clamp at zero during the round; deaths are applied at the end.
RoundOutcome execute_round(std::span<NodeState> nodes, const ClusterAssignment& assignment,
                           RoutePlan plan, Position bs, const EnergyParams& params,
                           double aggregated_bits);

}  // namespace minen
