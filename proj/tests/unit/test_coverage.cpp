#include <gtest/gtest.h>

#include "minen/coverage.hpp"
#include "minen/network.hpp"
#include "minen/rng.hpp"
#include "test_support.hpp"

namespace minen {
namespace {

using testing::make_node;

// Brute force: walk every cell and test it against every counted node.
std::size_t brute_force(const GridSpec& g, const std::vector<NodeState>& nodes) {
  std::size_t covered = 0;
  for (std::size_t r = 0; r < g.cells_per_axis; ++r) {
    for (std::size_t c = 0; c < g.cells_per_axis; ++c) {
      const double cx = (static_cast<double>(c) + 0.5) * (g.width / static_cast<double>(g.cells_per_axis));
      const double cy = (static_cast<double>(r) + 0.5) * (g.height / static_cast<double>(g.cells_per_axis));
      for (const auto& n : nodes) {
        const double dx = n.pos.x - cx, dy = n.pos.y - cy;
        if (n.alive && n.awake && dx * dx + dy * dy <= g.sensing_radius * g.sensing_radius) {
          ++covered;
          break;
        }
      }
    }
  }
  return covered;
}

TEST(Coverage, NoAwakeNodesCoverNothing) {
  const GridSpec g;
  std::vector<NodeState> nodes{make_node(0, 10, 10), make_node(1, 100, 100)};
  const CoverageMap map(g, nodes);
  for (auto& n : nodes) n.awake = false;
  EXPECT_EQ(coverage_of(nodes, map), 0U);
}

TEST(Coverage, HugeRadiusCoversEverything) {
  GridSpec g;
  g.sensing_radius = 1000;
  const std::vector<NodeState> nodes{make_node(0, 125, 125)};
  const CoverageMap map(g, nodes);
  EXPECT_EQ(coverage_of(nodes, map), g.cell_count());
}

TEST(Coverage, CenterNodeMatchesBruteForce) {
  const GridSpec g;
  const std::vector<NodeState> nodes{make_node(0, 125, 125)};
  const CoverageMap map(g, nodes);
  const std::size_t oracle = brute_force(g, nodes);
  EXPECT_EQ(coverage_of(nodes, map), oracle);
  // Frozen from the brute-force oracle: cell centers on a 5 m lattice offset
  // by 2.5 m, within 25 m of (125, 125).
  EXPECT_EQ(oracle, 80U);
}

TEST(CoverageProperty, RandomNetworksMatchBruteForce) {
  RngStream rng(31);
  for (int t = 0; t < 40; ++t) {
    GridSpec g;
    g.cells_per_axis = 5 + rng.index(40);
    g.sensing_radius = rng.uniform(0, 60);
    NetworkConfig nc;
    nc.node_count = 1 + rng.index(40);
    auto nodes = build_network(nc, rng);
    const CoverageMap map(g, nodes);
    for (auto& n : nodes) n.awake = rng.bernoulli(0.6);
    ASSERT_EQ(coverage_of(nodes, map), brute_force(g, nodes));

    std::vector<NodeId> ids;
    std::vector<std::uint8_t> asleep;
    for (const auto& n : nodes) {
      ids.push_back(n.id);
      asleep.push_back(n.awake ? 0 : 1);
    }
    std::vector<std::uint64_t> scratch(map.words_per_node());
    ASSERT_EQ(map.masked_union_count(ids, asleep, scratch), brute_force(g, nodes));
  }
}

TEST(CoverageProperty, SleepingNeverIncreasesCoverage) {
  RngStream rng(4);
  NetworkConfig nc;
  nc.node_count = 60;
  auto nodes = build_network(nc, rng);
  const CoverageMap map(GridSpec{}, nodes);
  std::size_t last = coverage_of(nodes, map);
  for (auto& n : nodes) {
    n.awake = false;
    const std::size_t now = coverage_of(nodes, map);
    ASSERT_LE(now, last);
    last = now;
  }
  EXPECT_EQ(last, 0U);
}

}  // namespace
}  // namespace minen
