#pragma once

#include <cmath>
#include <cstddef>

#include "minen/types.hpp"

namespace minen {

/// First-order radio model constants and routing edge weights.
struct EnergyParams {
  double e_elec = 50e-9;      // J/bit, transceiver electronics
  double eps_fs = 10e-12;     // J/bit/m^2, free-space amplifier
  double eps_mp = 0.0013e-12; // J/bit/m^4, multipath amplifier
  double w1 = 1.0;            // reception weight
  double w2 = 1.0;            // transmission weight
  double w3 = 1.0;            // energy-spent-so-far weight
  double round_time = 1.0;    // seconds per round

  /// Crossover distance between the d^2 and d^4 amplifier regimes. Always
  /// derived from the amplifier constants, never stored.
  double threshold_distance() const { return std::sqrt(eps_fs / eps_mp); }

  void validate() const;
};

/// Energy to transmit `bits` over `d` meters. Throws DomainError for
/// non-positive bits or negative distance.
double tx_energy(const EnergyParams& params, double d, double bits);

/// Energy to receive `bits`.
double rx_energy(const EnergyParams& params, double bits);

/// Transmission rate in bits per second for a message sent once per round.
double rate(double bits, const EnergyParams& params);

/// Combined energy already consumed by both endpoints of a link.
double energy_spent_so_far(const NodeState& i, const NodeState& j);

/// Weighted link cost: w1*rx + w2*tx + w3*spent. The parts are kept so the
/// decomposition can be inspected.
struct EdgeCost {
  double value = 0.0;
  double rx_part = 0.0;
  double tx_part = 0.0;
  double esf_part = 0.0;
};

/// Cost of the head-to-head link i -> j carrying `bits` per round. Uses the
/// per-unit-time energies (bits / round_time).
EdgeCost edge_cost(const EnergyParams& params, const NodeState& i, const NodeState& j,
                   double bits);

/// Cost of the link from node i to the base station. The base station has
/// no reception cost and no spent energy.
EdgeCost bs_edge_cost(const EnergyParams& params, const NodeState& i, Position bs, double bits);

/// Running record of energy deductions within one round. Deductions clamp at
/// zero; `applied` is what actually left the batteries.
class EnergyLedger {
 public:
  /// Deducts up to `joules` from `node`, returns the amount applied.
  double charge(NodeState& node, double joules);

  double applied() const { return applied_; }
  double requested() const { return requested_; }
  std::size_t charges() const { return charges_; }

 private:
  double applied_ = 0.0;
  double requested_ = 0.0;
  std::size_t charges_ = 0;
};

}  // namespace minen
