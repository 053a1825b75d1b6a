#include "minen/routing.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "minen/error.hpp"
#include "minen/network.hpp"

namespace minen {

HeadGraph::HeadGraph(std::vector<NodeId> heads) : heads_(std::move(heads)) {
  std::sort(heads_.begin(), heads_.end());
  if (std::adjacent_find(heads_.begin(), heads_.end()) != heads_.end()) {
    throw ContractError("HeadGraph: duplicate head id");
  }
  edges_.resize(vertex_count() * vertex_count());
}

NodeId HeadGraph::node_of(std::size_t vertex) const {
  if (vertex == base_vertex()) {
    return kBaseStation;
  }
  return heads_.at(vertex);
}

std::size_t HeadGraph::vertex_of(NodeId id) const {
  if (id == kBaseStation) {
    return base_vertex();
  }
  const auto it = std::lower_bound(heads_.begin(), heads_.end(), id);
  if (it == heads_.end() || *it != id) {
    throw ContractError("HeadGraph: node " + std::to_string(id) + " is not a head");
  }
  return static_cast<std::size_t>(it - heads_.begin());
}

void HeadGraph::set_edge(std::size_t from, std::size_t to, const HeadEdge& edge) {
  if (from >= vertex_count() || to >= vertex_count()) {
    throw ContractError("HeadGraph: vertex out of range");
  }
  if (from == to) {
    throw ContractError("HeadGraph: self loops are not allowed");
  }
  if (from == base_vertex()) {
    throw ContractError("HeadGraph: the base station has no outgoing edges");
  }
  if (!(edge.cost.value >= 0.0)) {
    throw ContractError("HeadGraph: edge costs must be non-negative");
  }
  auto& slot = edges_[from * vertex_count() + to];
  if (!slot) {
    ++edge_count_;
  }
  slot = edge;
}

const HeadEdge* HeadGraph::edge(std::size_t from, std::size_t to) const {
  const auto& slot = edges_.at(from * vertex_count() + to);
  return slot ? &*slot : nullptr;
}

HeadGraph build_head_graph(std::span<const NodeId> heads, std::span<const NodeState> nodes,
                           Position bs, const EnergyParams& params, double aggregated_bits) {
  HeadGraph g(std::vector<NodeId>(heads.begin(), heads.end()));
  for (std::size_t u = 0; u < g.head_count(); ++u) {
    const NodeState& from = nodes[g.node_of(u)];
    for (std::size_t v = 0; v < g.head_count(); ++v) {
      if (u != v) {
        g.set_edge(u, v, {edge_cost(params, from, nodes[g.node_of(v)], aggregated_bits),
                          aggregated_bits});
      }
    }
    g.set_edge(u, g.base_vertex(), {bs_edge_cost(params, from, bs, aggregated_bits),
                                    aggregated_bits});
  }
  return g;
}

namespace {

struct Label {
  double cost = std::numeric_limits<double>::infinity();
  std::size_t hops = 0;
  std::vector<std::size_t> path;  // vertices from the source
  bool reached = false;
};

// Strict ordering on (cost, hops, vertex sequence).
bool better(double cost, std::size_t hops, const std::vector<std::size_t>& path,
            const Label& than) {
  if (!than.reached) return true;
  if (cost != than.cost) return cost < than.cost;
  if (hops != than.hops) return hops < than.hops;
  return std::lexicographical_compare(path.begin(), path.end(), than.path.begin(),
                                      than.path.end());
}

}  // namespace

Route dijkstra(const HeadGraph& graph, NodeId source) {
  const std::size_t n = graph.vertex_count();
  const std::size_t src = graph.vertex_of(source);
  const std::size_t target = graph.base_vertex();
  if (src == target) {
    throw ContractError("dijkstra: source must be a head");
  }

  std::vector<Label> labels(n);
  std::vector<bool> settled(n, false);
  labels[src] = {0.0, 0, {src}, true};

  for (;;) {
    std::size_t u = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (settled[v] || !labels[v].reached) continue;
      if (u == n || better(labels[v].cost, labels[v].hops, labels[v].path, labels[u])) {
        u = v;
      }
    }
    if (u == n) {
      break;
    }
    settled[u] = true;
    if (u == target) {
      break;
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (settled[v]) continue;
      const HeadEdge* e = graph.edge(u, v);
      if (e == nullptr) continue;
      const double cost = labels[u].cost + e->cost.value;
      std::vector<std::size_t> path = labels[u].path;
      path.push_back(v);
      if (better(cost, labels[u].hops + 1, path, labels[v])) {
        labels[v] = {cost, labels[u].hops + 1, std::move(path), true};
      }
    }
  }

  if (!labels[target].reached) {
    throw InternalError("dijkstra: base station unreachable from node " + std::to_string(source));
  }
  Route route;
  route.cost = labels[target].cost;
  route.path.reserve(labels[target].path.size());
  for (std::size_t v : labels[target].path) {
    route.path.push_back(graph.node_of(v));
  }
  return route;
}

const Route* RoutePlan::route_for(NodeId head) const {
  for (const auto& r : routes) {
    if (!r.path.empty() && r.path.front() == head) {
      return &r;
    }
  }
  return nullptr;
}

double RoutePlan::total_cost() const {
  double sum = 0.0;
  for (const auto& r : routes) {
    sum += r.cost;
  }
  return sum;
}

RoutePlan plan_routes(const HeadGraph& graph) {
  RoutePlan plan;
  plan.routes.reserve(graph.head_count());
  for (NodeId head : graph.heads()) {
    plan.routes.push_back(dijkstra(graph, head));
  }
  return plan;
}

RoutePlan direct_routes(std::span<const NodeId> heads, std::span<const NodeState> nodes,
                        Position bs, const EnergyParams& params, double aggregated_bits) {
  RoutePlan plan;
  std::vector<NodeId> sorted(heads.begin(), heads.end());
  std::sort(sorted.begin(), sorted.end());
  for (NodeId h : sorted) {
    plan.routes.push_back(
        {{h, kBaseStation}, bs_edge_cost(params, nodes[h], bs, aggregated_bits).value});
  }
  return plan;
}

RoundOutcome execute_round(std::span<NodeState> nodes, const ClusterAssignment& assignment,
                           RoutePlan plan, Position bs, const EnergyParams& params,
                           double aggregated_bits) {
  EnergyLedger ledger;
  RoundOutcome out;
  out.heads = assignment.heads.size();

  for (std::size_t i = 0; i < assignment.members.size(); ++i) {
    NodeState& member = nodes[assignment.members[i]];
    const NodeId head_id = assignment.heads.at(assignment.labels[i]);
    if (member.id == head_id || !member.active()) {
      continue;
    }
    NodeState& head = nodes[head_id];
    const double bits = static_cast<double>(member.msg_len);
    ledger.charge(member, tx_energy(params, distance(member.pos, head.pos), bits));
    ledger.charge(head, rx_energy(params, bits));
    ++out.members;
  }

  for (const Route& route : plan.routes) {
    for (std::size_t hop = 0; hop + 1 < route.path.size(); ++hop) {
      NodeState& sender = nodes[route.path[hop]];
      const NodeId to = route.path[hop + 1];
      if (to == kBaseStation) {
        ledger.charge(sender, tx_energy(params, distance(sender.pos, bs), aggregated_bits));
      } else {
        NodeState& receiver = nodes[to];
        ledger.charge(sender,
                      tx_energy(params, distance(sender.pos, receiver.pos), aggregated_bits));
        ledger.charge(receiver, rx_energy(params, aggregated_bits));
      }
    }
  }

  out.energy_applied = ledger.applied();
  out.energy_requested = ledger.requested();
  out.charges = ledger.charges();
  out.path_cost_total = plan.total_cost();
  out.plan = std::move(plan);
  out.deaths = apply_deaths(nodes);
  return out;
}

}  // namespace minen
