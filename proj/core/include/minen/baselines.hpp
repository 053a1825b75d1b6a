#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "minen/clustering.hpp"
#include "minen/energy.hpp"
#include "minen/rng.hpp"
#include "minen/routing.hpp"
#include "minen/types.hpp"

namespace minen {

// --- LEACH -----------------------------------------------------------------
//
// Canonical randomized head rotation: in round r a node that has not yet
// served as head in the current epoch of ceil(1/p) rounds becomes head with
// probability T = p / (1 - p * (r mod ceil(1/p))). Members join the nearest
// head; heads send straight to the base station.

struct LeachConfig {
  double p = 0.05;

  void validate() const;
};

std::uint64_t leach_epoch_length(double p);
double leach_threshold(double p, std::uint64_t round);

struct LeachState {
  std::uint64_t round = 0;
  std::vector<std::uint8_t> served;  // indexed by node id, reset every epoch
};

/// Self-election and nearest-head membership for one round. Advances
/// `state.round`. When nobody volunteers, the active node nearest the base
/// station (preferring nodes that have not served) is forced to be head.
ClusterAssignment leach_clusters(std::span<const NodeState> nodes, LeachState& state,
                                 const LeachConfig& cfg, Position bs, RngStream& rng);

RoundOutcome leach_round(std::span<NodeState> nodes, LeachState& state, const LeachConfig& cfg,
                         const EnergyParams& params, Position bs, double aggregated_bits,
                         RngStream& rng);

// --- Fuzzy c-means ---------------------------------------------------------
//
// Alternating minimization of J = sum_i sum_k u_ik^m * |x_i - v_k|^2 with
//   u_ik = 1 / sum_j (|x_i - v_k|^2 / |x_i - v_j|^2)^(1/(m-1))
//   v_k  = sum_i u_ik^m x_i / sum_i u_ik^m
// A point that coincides with a center belongs to it with membership 1.

struct FcmConfig {
  // Absent: same default as the MINEN cluster count.
  std::optional<std::size_t> c;
  double m = 2.0;
  double tol = 1e-5;
  int max_iter = 200;

  void validate() const;
};

struct FcmResult {
  Eigen::MatrixXd memberships;  // n x c, rows sum to 1
  Eigen::MatrixXd centroids;    // c x d
  std::vector<std::size_t> labels;
  // Objective after each center update.
  std::vector<double> objective_history;
  int iterations = 0;
  bool converged = false;
};

/// Centers start at c distinct random points; stops when no center moves by
/// more than cfg.tol. Throws ConfigError when c is zero or exceeds n.
/// The objective history is skipped when `track_objective` is false.
FcmResult fuzzy_cmeans(const Eigen::MatrixXd& points, std::size_t c, const FcmConfig& cfg,
                       RngStream& rng, bool track_objective = true);

Eigen::MatrixXd fcm_memberships(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids,
                                double m);
double fcm_objective(const Eigen::MatrixXd& points, const Eigen::MatrixXd& memberships,
                     const Eigen::MatrixXd& centroids, double m);

/// FCM over the positions of active nodes, heads by residual energy,
/// single-hop to the base station.
RoundOutcome fcm_round(std::span<NodeState> nodes, const FcmConfig& cfg, std::size_t clusters,
                       const EnergyParams& params, Position bs, double aggregated_bits,
                       RngStream& rng);

}  // namespace minen
