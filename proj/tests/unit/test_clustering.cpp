#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "minen/clustering.hpp"
#include "minen/error.hpp"
#include "minen/network.hpp"
#include "minen/rng.hpp"
#include "test_support.hpp"

namespace minen {
namespace {

using testing::make_node;

Eigen::MatrixXd random_points(RngStream& rng, Eigen::Index n, Eigen::Index d) {
  Eigen::MatrixXd x(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = rng.uniform(-3, 3);
  return x;
}

TEST(Features, IdenticalNodesGiveZeroVectors) {
  std::vector<NodeState> nodes;
  for (NodeId i = 0; i < 5; ++i) nodes.push_back(make_node(i, 10, 10));
  const auto f = extract_features(nodes, {0, 0});
  ASSERT_EQ(f.size(), 5U);
  EXPECT_TRUE(f.points.isZero(0.0));
}

TEST(Features, TwoNodeZScore) {
  // Distances 10 and 30: mean 20, population sd 10.
  std::vector<NodeState> nodes{make_node(0, 10, 0), make_node(1, 30, 0)};
  const auto f = extract_features(nodes, {0, 0});
  EXPECT_DOUBLE_EQ(f.points(0, FeatureSet::kDistToBs), (10.0 - 20.0) / 10.0);
  EXPECT_DOUBLE_EQ(f.points(1, FeatureSet::kDistToBs), (30.0 - 20.0) / 10.0);
  EXPECT_DOUBLE_EQ(f.points(0, FeatureSet::kDistToBs), -1.0);
  EXPECT_DOUBLE_EQ(f.points(1, FeatureSet::kDistToBs), 1.0);
}

TEST(Features, FixedOrderAndActiveOnly) {
  std::vector<NodeState> nodes{make_node(0, 10, 0, 2, 2, 500), make_node(1, 30, 0, 2, 2, 1500),
                               make_node(2, 50, 0, 2, 2, 900)};
  nodes[0].sensed_data = 100;
  nodes[1].sensed_data = 300;
  nodes[2].awake = false;
  const auto f = extract_features(nodes, {0, 0});
  ASSERT_EQ(f.ids, (std::vector<NodeId>{0, 1}));
  EXPECT_DOUBLE_EQ(f.points(0, FeatureSet::kMsgLen), -1.0);
  EXPECT_DOUBLE_EQ(f.points(1, FeatureSet::kSensedData), 1.0);
}

TEST(Features, EmptyPopulation) {
  std::vector<NodeState> nodes{make_node(0, 1, 1)};
  nodes[0].awake = false;
  EXPECT_EQ(extract_features(nodes, {0, 0}).size(), 0U);
}

TEST(KMeans, SeparatedPairsGroupTogether) {
  Eigen::MatrixXd x(4, 2);
  x << 0, 0, 0, 1, 10, 10, 10, 11;
  RngStream rng(1);
  const auto r = kmeans(x, 2, rng);
  EXPECT_EQ(r.labels[0], r.labels[1]);
  EXPECT_EQ(r.labels[2], r.labels[3]);
  EXPECT_NE(r.labels[0], r.labels[2]);
}

TEST(KMeans, SingleClusterCentroidIsMean) {
  RngStream rng(2);
  const auto x = random_points(rng, 30, 3);
  const auto r = kmeans(x, 1, rng);
  EXPECT_TRUE(r.centroids.row(0).isApprox(x.colwise().mean(), 1e-12));
}

TEST(KMeans, SaturationHasZeroInertia) {
  RngStream rng(3);
  const auto x = random_points(rng, 12, 3);
  const auto r = kmeans(x, 12, rng);
  EXPECT_EQ(inertia(x, r.centroids, r.labels), 0.0);
}

TEST(KMeans, TooManyClustersIsConfigError) {
  RngStream rng(3);
  const auto x = random_points(rng, 4, 3);
  EXPECT_THROW(kmeans(x, 5, rng), ConfigError);
  EXPECT_THROW(gmm_fit(x, 5, rng), ConfigError);
  EXPECT_THROW(kmeans(x, 0, rng), ConfigError);
}

TEST(KMeansProperty, InertiaNonIncreasingAndClustersNonEmpty) {
  RngStream rng(10);
  for (int t = 0; t < 30; ++t) {
    const Eigen::Index n = 5 + static_cast<Eigen::Index>(rng.index(80));
    const auto x = random_points(rng, n, 3);
    const std::size_t k = 1 + rng.index(std::min<std::size_t>(10, n));
    const auto r = kmeans(x, k, rng);
    for (std::size_t i = 1; i < r.inertia_history.size(); ++i) {
      ASSERT_LE(r.inertia_history[i], r.inertia_history[i - 1]);
    }
    std::vector<int> sizes(k, 0);
    for (auto l : r.labels) ++sizes[l];
    for (int s : sizes) ASSERT_GT(s, 0);
  }
}

TEST(KMeans, DeterministicPerSeed) {
  RngStream data(4);
  const auto x = random_points(data, 50, 3);
  RngStream a(9), b(9);
  EXPECT_EQ(kmeans(x, 4, a).labels, kmeans(x, 4, b).labels);
}

TEST(Gmm, SingleComponent) {
  RngStream rng(5);
  const auto x = random_points(rng, 40, 3);
  const auto r = gmm_fit(x, 1, rng);
  EXPECT_DOUBLE_EQ(r.model.weights(0), 1.0);
  EXPECT_TRUE(r.model.means.row(0).isApprox(x.colwise().mean(), 1e-10));
  EXPECT_TRUE((r.responsibilities.array() == 1.0).all());
}

TEST(Gmm, WeightsSumToOneAndCovarianceFloored) {
  RngStream rng(6);
  for (int t = 0; t < 10; ++t) {
    const auto x = random_points(rng, 60, 3);
    GmmOptions opt;
    opt.covariance_floor = 1e-3;
    const auto r = gmm_fit(x, 4, rng, opt);
    EXPECT_NEAR(r.model.weights.sum(), 1.0, 1e-9);
    EXPECT_TRUE((r.model.weights.array() >= 0.0).all());
    EXPECT_TRUE(r.model.covariance.isApprox(r.model.covariance.transpose()));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(r.model.covariance);
    EXPECT_GE(eig.eigenvalues().minCoeff(), opt.covariance_floor * (1 - 1e-9));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      EXPECT_NEAR(r.responsibilities.row(i).sum(), 1.0, 1e-12);
    }
  }
}

TEST(Gmm, TwoBlobsRecovered) {
  // Oracle: points generated with known blob labels.
  RngStream rng(7);
  Eigen::MatrixXd x(40, 3);
  std::vector<int> truth(40);
  for (int i = 0; i < 40; ++i) {
    truth[i] = i < 20 ? 0 : 1;
    const double c = truth[i] == 0 ? -5.0 : 5.0;
    for (int j = 0; j < 3; ++j) x(i, j) = c + rng.uniform(-1, 1);
  }
  const auto r = gmm_fit(x, 2, rng);
  int agree = 0;
  for (int i = 0; i < 40; ++i) agree += (static_cast<int>(r.labels[i]) == truth[i]);
  const int matched = std::max(agree, 40 - agree);
  EXPECT_GE(matched, 38);
}

TEST(GmmProperty, LogLikelihoodNonDecreasing) {
  RngStream rng(8);
  for (int t = 0; t < 20; ++t) {
    const Eigen::Index n = 10 + static_cast<Eigen::Index>(rng.index(60));
    const auto x = random_points(rng, n, 3);
    const auto r = gmm_fit(x, 1 + rng.index(6), rng);
    for (std::size_t i = 1; i < r.log_likelihood_history.size(); ++i) {
      ASSERT_GE(r.log_likelihood_history[i], r.log_likelihood_history[i - 1] - 1e-9);
    }
    ASSERT_NEAR(r.log_likelihood_history.back(), mean_log_likelihood(r.model, x), 1e-9);
  }
}

TEST(Gmm, DeterministicPerSeed) {
  RngStream data(4);
  const auto x = random_points(data, 50, 3);
  RngStream a(9), b(9);
  EXPECT_EQ(gmm_fit(x, 3, a).labels, gmm_fit(x, 3, b).labels);
}

TEST(CompactLabels, RemovesGaps) {
  std::vector<std::size_t> labels{4, 0, 4, 7};
  EXPECT_EQ(compact_labels(labels), 3U);
  EXPECT_EQ(labels, (std::vector<std::size_t>{1, 0, 1, 2}));
}

TEST(ElectHeads, MaximumResidualEnergyWins) {
  std::vector<NodeState> nodes{make_node(0, 0, 0, 2.0), make_node(1, 0, 0, 1.5),
                               make_node(2, 0, 0, 1.0)};
  const std::vector<NodeId> members{0, 1, 2};
  const std::vector<std::size_t> labels{0, 0, 0};
  EXPECT_EQ(elect_heads(nodes, members, labels, 1), (std::vector<NodeId>{0}));
  nodes[0].energy = 0.5;
  EXPECT_EQ(elect_heads(nodes, members, labels, 1), (std::vector<NodeId>{1}));
}

TEST(ElectHeads, TiesGoToLowestIdAndSingletons) {
  std::vector<NodeState> nodes{make_node(0, 0, 0, 1.0), make_node(1, 0, 0, 1.0),
                               make_node(2, 0, 0, 1.0), make_node(3, 0, 0, 0.2)};
  const std::vector<NodeId> members{2, 1, 0, 3};
  const std::vector<std::size_t> labels{0, 0, 0, 1};
  EXPECT_EQ(elect_heads(nodes, members, labels, 2), (std::vector<NodeId>{0, 3}));
}

TEST(ElectHeads, EmptyClusterIsInternalError) {
  std::vector<NodeState> nodes{make_node(0, 0, 0)};
  const std::vector<NodeId> members{0};
  const std::vector<std::size_t> labels{0};
  EXPECT_THROW(elect_heads(nodes, members, labels, 2), InternalError);
}

TEST(ElectHeadsProperty, InvariantUnderReordering) {
  RngStream rng(12);
  for (int t = 0; t < 200; ++t) {
    std::vector<NodeState> nodes;
    std::vector<NodeId> members;
    std::vector<std::size_t> labels;
    const std::size_t k = 1 + rng.index(4);
    for (NodeId i = 0; i < 12; ++i) {
      // Few distinct energies so ties are common.
      nodes.push_back(make_node(i, 0, 0, 0.5 * static_cast<double>(1 + rng.index(3))));
      members.push_back(i);
      labels.push_back(i < k ? i : rng.index(k));
    }
    const auto heads = elect_heads(nodes, members, labels, k);
    std::vector<std::size_t> order(members.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
    std::vector<NodeId> m2;
    std::vector<std::size_t> l2;
    for (auto o : order) {
      m2.push_back(members[o]);
      l2.push_back(labels[o]);
    }
    ASSERT_EQ(elect_heads(nodes, m2, l2, k), heads);
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t i = 0; i < members.size(); ++i) {
        if (labels[i] == c) ASSERT_GE(nodes[heads[c]].energy, nodes[members[i]].energy);
      }
    }
  }
}

TEST(ElectHeads, EqualEnergiesPickRandomlyButReproducibly) {
  std::vector<NodeState> nodes;
  std::vector<NodeId> members;
  for (NodeId i = 0; i < 10; ++i) {
    nodes.push_back(make_node(i, 0, 0));
    members.push_back(i);
  }
  const std::vector<std::size_t> labels(10, 0);
  std::set<NodeId> seen;
  for (std::uint64_t s = 0; s < 50; ++s) {
    RngStream a(s), b(s);
    const auto h = elect_heads(nodes, members, labels, 1, a);
    ASSERT_EQ(h, elect_heads(nodes, members, labels, 1, b));
    seen.insert(h[0]);
  }
  EXPECT_GT(seen.size(), 3U);
  // Not all equal: the deterministic rule applies, ties to the lowest id.
  nodes[6].energy = 1.0;
  RngStream rng(1);
  EXPECT_EQ(elect_heads(nodes, members, labels, 1, rng), (std::vector<NodeId>{0}));
}

}  // namespace
}  // namespace minen
