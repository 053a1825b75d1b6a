#include "minen/protocol.hpp"

#include <algorithm>

#include "minen/network.hpp"

namespace minen {

ClusterAssignment minen_clusters(std::span<const NodeState> nodes, Position bs,
                                 std::size_t clusters, const ClusteringOptions& options,
                                 RngStream& rng) {
  ClusterAssignment a;
  a.method = options.method;
  FeatureSet features = extract_features(nodes, bs);
  if (features.size() == 0) {
    return a;
  }
  a.members = std::move(features.ids);
  const std::size_t k = std::clamp<std::size_t>(clusters, 1, a.members.size());
  if (options.method == ClusteringMethod::kmeans) {
    a.labels = kmeans(features.points, k, rng, options.kmeans).labels;
  } else {
    a.labels = gmm_fit(features.points, k, rng, options.gmm).labels;
  }
  a.cluster_count = compact_labels(a.labels);
  a.heads = elect_heads(nodes, a.members, a.labels, a.cluster_count, rng);
  return a;
}

RoundOutcome minen_round(std::span<NodeState> nodes, const SimulationConfig& cfg,
                         RngStream& rng) {
  const std::size_t k = cfg.network.effective_cluster_count(alive_count(nodes));
  const ClusterAssignment a =
      minen_clusters(nodes, cfg.network.bs_pos, k, cfg.clustering, rng);
  if (a.members.empty()) {
    return {};
  }
  const HeadGraph graph =
      build_head_graph(a.heads, nodes, cfg.network.bs_pos, cfg.energy, cfg.aggregated_len_bits);
  return execute_round(nodes, a, plan_routes(graph), cfg.network.bs_pos, cfg.energy,
                       cfg.aggregated_len_bits);
}

namespace {

class MinenProtocol final : public Protocol {
 public:
  explicit MinenProtocol(const SimulationConfig& cfg) : cfg_(cfg) {}
  ProtocolKind kind() const override { return ProtocolKind::minen; }
  RoundOutcome run_round(std::span<NodeState> nodes, RngStream& rng) override {
    return minen_round(nodes, cfg_, rng);
  }

 private:
  SimulationConfig cfg_;
};

class LeachProtocol final : public Protocol {
 public:
  explicit LeachProtocol(const SimulationConfig& cfg) : cfg_(cfg) {}
  ProtocolKind kind() const override { return ProtocolKind::leach; }
  RoundOutcome run_round(std::span<NodeState> nodes, RngStream& rng) override {
    if (active_count(nodes) == 0) {
      ++state_.round;
      return {};
    }
    return leach_round(nodes, state_, cfg_.leach, cfg_.energy, cfg_.network.bs_pos,
                       cfg_.aggregated_len_bits, rng);
  }

 private:
  SimulationConfig cfg_;
  LeachState state_;
};

class FcmProtocol final : public Protocol {
 public:
  explicit FcmProtocol(const SimulationConfig& cfg) : cfg_(cfg) {}
  ProtocolKind kind() const override { return ProtocolKind::fcm; }
  RoundOutcome run_round(std::span<NodeState> nodes, RngStream& rng) override {
    const std::size_t alive = alive_count(nodes);
    const std::size_t c =
        cfg_.fcm.c ? std::min(*cfg_.fcm.c, alive) : cfg_.network.effective_cluster_count(alive);
    return fcm_round(nodes, cfg_.fcm, c, cfg_.energy, cfg_.network.bs_pos,
                     cfg_.aggregated_len_bits, rng);
  }

 private:
  SimulationConfig cfg_;
};

}  // namespace

std::unique_ptr<Protocol> make_protocol(const SimulationConfig& cfg) {
  switch (cfg.protocol) {
    case ProtocolKind::leach: return std::make_unique<LeachProtocol>(cfg);
    case ProtocolKind::fcm: return std::make_unique<FcmProtocol>(cfg);
    case ProtocolKind::minen: break;
  }
  return std::make_unique<MinenProtocol>(cfg);
}

}  // namespace minen
