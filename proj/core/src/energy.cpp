#include "minen/energy.hpp"

#include <algorithm>
#include <string>

#include "minen/error.hpp"

namespace minen {

void EnergyParams::validate() const {
  if (!(e_elec > 0.0) || !(eps_fs > 0.0) || !(eps_mp > 0.0)) {
    throw ConfigError("e_elec, eps_fs and eps_mp must be positive");
  }
  if (!(w1 >= 0.0) || !(w2 >= 0.0) || !(w3 >= 0.0)) {
    throw ConfigError("edge weights w1, w2, w3 must be non-negative");
  }
  if (!(round_time > 0.0)) {
    throw ConfigError("round_time must be positive");
  }
}

namespace {

void require_bits(double bits) {
  if (!(bits > 0.0)) {
    throw DomainError("message length must be positive, got " + std::to_string(bits));
  }
}

}  // namespace

double tx_energy(const EnergyParams& params, double d, double bits) {
  require_bits(bits);
  if (!(d >= 0.0)) {
    throw DomainError("distance must be non-negative");
  }
  if (d < params.threshold_distance()) {
    return (params.e_elec + params.eps_fs * d * d) * bits;
  }
  const double d2 = d * d;
  return (params.e_elec + params.eps_mp * d2 * d2) * bits;
}

double rx_energy(const EnergyParams& params, double bits) {
  require_bits(bits);
  return params.e_elec * bits;
}

double rate(double bits, const EnergyParams& params) {
  require_bits(bits);
  return bits / params.round_time;
}

double energy_spent_so_far(const NodeState& i, const NodeState& j) {
  return (i.initial_energy - i.energy) + (j.initial_energy - j.energy);
}

EdgeCost edge_cost(const EnergyParams& params, const NodeState& i, const NodeState& j,
                   double bits) {
  const double r = rate(bits, params);
  EdgeCost c;
  c.rx_part = rx_energy(params, r);
  c.tx_part = tx_energy(params, distance(i.pos, j.pos), r);
  c.esf_part = energy_spent_so_far(i, j);
  c.value = params.w1 * c.rx_part + params.w2 * c.tx_part + params.w3 * c.esf_part;
  return c;
}

EdgeCost bs_edge_cost(const EnergyParams& params, const NodeState& i, Position bs, double bits) {
  const double r = rate(bits, params);
  EdgeCost c;
  c.rx_part = 0.0;
  c.tx_part = tx_energy(params, distance(i.pos, bs), r);
  c.esf_part = i.initial_energy - i.energy;
  c.value = params.w2 * c.tx_part + params.w3 * c.esf_part;
  return c;
}

double EnergyLedger::charge(NodeState& node, double joules) {
  const double applied = std::min(joules, node.energy);
  node.energy -= applied;
  applied_ += applied;
  requested_ += joules;
  ++charges_;
  return applied;
}

}  // namespace minen
