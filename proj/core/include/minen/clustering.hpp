#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "minen/rng.hpp"
#include "minen/types.hpp"

namespace minen {

/// Clustering features of the active population, one row per node in
/// ascending id order. Columns are z-scores of (distance to base station,
/// message length, sensed data); zero-variance columns are all zero.
struct FeatureSet {
  static constexpr Eigen::Index kDistToBs = 0;
  static constexpr Eigen::Index kMsgLen = 1;
  static constexpr Eigen::Index kSensedData = 2;

  std::vector<NodeId> ids;
  Eigen::MatrixXd points;  // ids.size() x 3

  std::size_t size() const { return ids.size(); }
};

FeatureSet extract_features(std::span<const NodeState> nodes, Position bs);

/// Column-wise z-score using the population standard deviation.
Eigen::MatrixXd zscore_columns(const Eigen::MatrixXd& raw);

struct KMeansOptions {
  int max_iterations = 100;
};

struct KMeansResult {
  std::vector<std::size_t> labels;
  Eigen::MatrixXd centroids;
  // Sum of squared point-to-centroid distances after each update step.
  std::vector<double> inertia_history;
  int iterations = 0;
  bool converged = false;
};

/// Lloyd's algorithm from k distinct random points. Empty clusters take the
/// point farthest from its centroid. Throws ConfigError when k is zero or
/// exceeds the number of points.
KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t k, RngStream& rng,
                    const KMeansOptions& options = {});

double inertia(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids,
               std::span<const std::size_t> labels);

struct GmmOptions {
  int max_iterations = 200;
  // Stop when the mean per-point log-likelihood improves by less than this.
  double tolerance = 1e-6;
  // Lower bound on the eigenvalues of the shared covariance.
  double covariance_floor = 1e-6;
};

/// Mixture of Gaussians sharing one full covariance matrix.
struct GmmModel {
  Eigen::VectorXd weights;     // mixture coefficients, sum to 1
  Eigen::MatrixXd means;       // one row per component
  Eigen::MatrixXd covariance;  // d x d, symmetric positive definite

  std::size_t n_components() const { return static_cast<std::size_t>(weights.size()); }
};

struct GmmResult {
  GmmModel model;
  Eigen::MatrixXd responsibilities;  // n x components
  std::vector<std::size_t> labels;   // argmax responsibility
  // Mean per-point log-likelihood at every E-step.
  std::vector<double> log_likelihood_history;
  int iterations = 0;
  bool converged = false;
};

/// Expectation-maximization fit, started from a k-means partition (its
/// centroids, cluster shares and pooled within-cluster covariance).
GmmResult gmm_fit(const Eigen::MatrixXd& points, std::size_t n_components, RngStream& rng,
                  const GmmOptions& options = {});

/// Mean per-point log-likelihood of `points` under `model`.
double mean_log_likelihood(const GmmModel& model, const Eigen::MatrixXd& points);

/// Renumbers labels to 0..m-1 (ascending original label), dropping empty
/// clusters. Returns m.
std::size_t compact_labels(std::vector<std::size_t>& labels);

enum class ClusteringMethod { kmeans, gmm };

struct ClusterAssignment {
  std::vector<NodeId> members;       // active nodes, ascending id
  std::vector<std::size_t> labels;   // labels[i] is the cluster of members[i]
  std::vector<NodeId> heads;         // heads[c] is the head of cluster c
  std::size_t cluster_count = 0;
  ClusteringMethod method = ClusteringMethod::gmm;

  /// Cluster index of `id`, or cluster_count when `id` is not a member.
  std::size_t cluster_of(NodeId id) const;
  bool is_head(NodeId id) const;
};

/// Maximum residual energy per cluster, ties to the lowest id. `nodes` is
/// indexed by id. Throws InternalError on an empty cluster.
std::vector<NodeId> elect_heads(std::span<const NodeState> nodes, std::span<const NodeId> members,
                                std::span<const std::size_t> labels, std::size_t cluster_count);

/// As above, except that a cluster whose members all hold exactly the same
/// energy (the first round) picks its head uniformly at random.
std::vector<NodeId> elect_heads(std::span<const NodeState> nodes, std::span<const NodeId> members,
                                std::span<const std::size_t> labels, std::size_t cluster_count,
                                RngStream& rng);

}  // namespace minen
