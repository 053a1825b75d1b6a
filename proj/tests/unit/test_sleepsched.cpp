#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "minen/coverage.hpp"
#include "minen/error.hpp"
#include "minen/network.hpp"
#include "minen/sleepsched.hpp"
#include "test_support.hpp"

namespace minen {
namespace {

using testing::make_node;

struct Toy {
  std::vector<NodeState> nodes;
  CoverageMap map;
  FitnessContext ctx;

  Toy(std::vector<NodeState> n, const GridSpec& g, double alpha = 0.34, double beta = 0.33,
      bool cp = false)
      : nodes(std::move(n)), map(g, nodes), ctx(nodes, map, alpha, beta, cp) {}
};

Toy six_node_toy() {
  std::vector<NodeState> nodes{make_node(0, 20, 20, 1.9), make_node(1, 80, 30, 0.7),
                               make_node(2, 50, 50, 1.2), make_node(3, 10, 90, 2.0),
                               make_node(4, 90, 90, 0.3), make_node(5, 60, 10, 1.5)};
  GridSpec g;
  g.width = g.height = 100;
  g.cells_per_axis = 20;
  g.sensing_radius = 30;
  return Toy(std::move(nodes), g);
}

// Two nodes that each cover exactly half of a 100-cell grid.
Toy half_and_half() {
  GridSpec g;
  g.width = 1000;
  g.height = 10;
  g.cells_per_axis = 10;
  g.sensing_radius = 260;
  return Toy({make_node(0, 250, 5, 4.0, 10.0), make_node(1, 750, 5, 6.0, 10.0)}, g);
}

TEST(Fitness, AllAwakeIsZero) {
  const Toy t = six_node_toy();
  EXPECT_EQ(t.ctx(Genome(6, 0)), 0.0);
}

TEST(Fitness, AllAsleepIsAlphaPlusBeta) {
  const Toy t = six_node_toy();
  EXPECT_EQ(t.ctx(Genome(6, 1)), 0.34 + 0.33);
  EXPECT_DOUBLE_EQ(t.ctx(Genome(6, 1)), 0.67);
}

TEST(Fitness, HandArithmeticExample) {
  const Toy t = half_and_half();
  ASSERT_EQ(t.ctx.total_coverage(), 100U);
  const Genome g{0, 1};
  EXPECT_EQ(t.ctx.awake_coverage(g), 50U);
  EXPECT_DOUBLE_EQ(t.ctx.awake_energy(g), 4.0);
  const double oracle = 0.34 * (1 - 4.0 / 10.0) + 0.33 * (1 - 50.0 / 100.0);
  EXPECT_DOUBLE_EQ(t.ctx(g), oracle);
  EXPECT_NEAR(t.ctx(g), 0.369, 1e-15);
}

TEST(Fitness, CoveragePreservingFlipsSecondTerm) {
  GridSpec g;
  g.width = 1000;
  g.height = 10;
  g.cells_per_axis = 10;
  g.sensing_radius = 260;
  const Toy t({make_node(0, 250, 5, 4.0, 10.0), make_node(1, 750, 5, 6.0, 10.0)}, g, 0.34, 0.33,
              true);
  EXPECT_DOUBLE_EQ(t.ctx(Genome{0, 1}), 0.34 * 0.6 + 0.33 * 0.5);
  EXPECT_DOUBLE_EQ(t.ctx(Genome{0, 0}), 0.33);
}

TEST(Fitness, LengthMismatchIsContractError) {
  const Toy t = six_node_toy();
  EXPECT_THROW(t.ctx(Genome(5, 0)), ContractError);
}

TEST(Fitness, ZeroDenominatorsGiveZeroTerms) {
  GridSpec g;
  g.sensing_radius = 0.1;  // covers no cell center
  const Toy t({make_node(0, 1, 1)}, g);
  EXPECT_EQ(t.ctx.total_coverage(), 0U);
  EXPECT_DOUBLE_EQ(t.ctx(Genome{1}), 0.34);
}

TEST(FitnessProperty, BoundedAndMonotoneInSleep) {
  RngStream rng(99);
  NetworkConfig nc;
  nc.node_count = 40;
  auto nodes = build_network(nc, rng);
  for (auto& n : nodes) n.energy = rng.uniform(0.01, 2.0);
  const CoverageMap map(GridSpec{}, nodes);
  const FitnessContext ctx(nodes, map, 0.34, 0.33);
  for (int t = 0; t < 2000; ++t) {
    Genome g = random_genome(nodes.size(), rng.uniform(), rng);
    const double f = ctx(g);
    ASSERT_GE(f, 0.0);
    ASSERT_LE(f, 0.67);
    const std::size_t i = rng.index(g.size());
    if (g[i] == 0) {
      const double e = ctx.awake_energy(g);
      const std::size_t c = ctx.awake_coverage(g);
      g[i] = 1;
      ASSERT_LE(ctx.awake_energy(g), e);
      ASSERT_LE(ctx.awake_coverage(g), c);
    }
  }
}

TEST(Mutate, RateZeroAndOne) {
  RngStream rng(1);
  Genome g = random_genome(100, 0.5, rng);
  Genome same = g;
  mutate(same, 0.0, rng);
  EXPECT_EQ(same, g);
  Genome flipped = g;
  mutate(flipped, 1.0, rng);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(flipped[i], g[i] ^ 1);
}

TEST(Mutate, BinomialFlipCount) {
  RngStream rng(2);
  const int trials = 50;
  for (int t = 0; t < trials; ++t) {
    Genome g(10000, 0);
    mutate(g, 0.01, rng);
    const long flips = std::count(g.begin(), g.end(), 1);
    // Binomial(10000, 0.01): mean 100, sd sqrt(99).
    ASSERT_NEAR(flips, 100.0, 4 * std::sqrt(99.0));
  }
}

TEST(Mutate, EachGeneFlipsWithTheSameProbability) {
  RngStream rng(3);
  std::vector<int> counts(20, 0);
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    Genome g(20, 0);
    mutate(g, 0.1, rng);
    for (std::size_t i = 0; i < g.size(); ++i) counts[i] += g[i];
  }
  for (int c : counts) ASSERT_NEAR(c, 2000.0, 4 * std::sqrt(trials * 0.1 * 0.9));
}

TEST(Crossover, IdenticalParentsAndGeneSources) {
  RngStream rng(4);
  const Genome a = random_genome(300, 0.5, rng);
  EXPECT_EQ(crossover(a, a, rng), a);
  const Genome b = random_genome(300, 0.5, rng);
  const Genome c = crossover(a, b, rng);
  for (std::size_t i = 0; i < c.size(); ++i) ASSERT_TRUE(c[i] == a[i] || c[i] == b[i]);
  EXPECT_THROW(crossover(a, Genome(5, 0), rng), ContractError);
}

TEST(Crossover, SourceIsFiftyFifty) {
  RngStream rng(5);
  const Genome a(1000, 0), b(1000, 1);
  long from_b = 0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    const Genome c = crossover(a, b, rng);
    from_b += std::count(c.begin(), c.end(), 1);
  }
  const double n = 1000.0 * trials;
  EXPECT_NEAR(from_b, n / 2, 4 * std::sqrt(n * 0.25));
}

SchedulerConfig base_cfg(SchedulerAlgorithm a) {
  SchedulerConfig cfg;
  cfg.algorithm = a;
  cfg.max_iterations = 20;
  cfg.population_size = 8;
  return cfg;
}

TEST(Gso, FrozenAllAwakePopulationStaysAwake) {
  const Toy t = six_node_toy();
  SchedulerConfig cfg = base_cfg(SchedulerAlgorithm::gso);
  cfg.mutation_rate = 0.0;
  cfg.initial_sleep_probability = 0.0;
  RngStream rng(1);
  const auto r = gso_schedule(t.ctx, cfg, rng);
  EXPECT_EQ(r.best.asleep, Genome(6, 0));
  EXPECT_EQ(r.best.fitness, 0.0);
}

TEST(Ga, FrozenIdenticalPopulationIsReturned) {
  const Toy t = six_node_toy();
  SchedulerConfig cfg = base_cfg(SchedulerAlgorithm::ga);
  cfg.mutation_rate = 0.0;
  cfg.initial_sleep_probability = 1.0;
  RngStream rng(1);
  const auto r = ga_schedule(t.ctx, cfg, rng);
  EXPECT_EQ(r.best.asleep, Genome(6, 1));
}

class SchedulerProperty : public ::testing::TestWithParam<SchedulerAlgorithm> {};

TEST_P(SchedulerProperty, ElitistMonotoneAndBeatsInitialPopulation) {
  const Toy t = six_node_toy();
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    SchedulerConfig cfg = base_cfg(GetParam());
    cfg.initial_sleep_probability = 0.2;
    RngStream rng(seed);
    const auto r = run_scheduler(t.ctx, cfg, rng);
    ASSERT_EQ(r.best_history.size(), 20U);
    for (std::size_t i = 1; i < r.best_history.size(); ++i) {
      ASSERT_GE(r.best_history[i], r.best_history[i - 1]);
    }
    ASSERT_GE(r.best.fitness, r.initial_best);
    ASSERT_EQ(r.best.fitness, r.max_observed);
    ASSERT_EQ(r.best.fitness, t.ctx(r.best.asleep));
    ASSERT_EQ(r.evaluations, 8U + 20U * 8U);
  }
}

TEST_P(SchedulerProperty, DeterministicPerSeed) {
  const Toy t = six_node_toy();
  const SchedulerConfig cfg = base_cfg(GetParam());
  RngStream a(5), b(5);
  EXPECT_EQ(run_scheduler(t.ctx, cfg, a).best.asleep, run_scheduler(t.ctx, cfg, b).best.asleep);
}

INSTANTIATE_TEST_SUITE_P(AllSchedulers, SchedulerProperty,
                         ::testing::Values(SchedulerAlgorithm::gso, SchedulerAlgorithm::ga,
                                           SchedulerAlgorithm::pso));

TEST(Pso, NeutralVelocityRegeneratesAtOneHalf) {
  RngStream rng(6);
  const PsoParams params;
  long ones = 0;
  const int trials = 200;
  const std::size_t n = 500;
  for (int t = 0; t < trials; ++t) {
    Genome x(n, static_cast<std::uint8_t>(t % 2));
    std::vector<double> v(n, 0.0);
    const Genome best = x;
    pso_update(x, v, best, best, params, rng);
    ones += std::count(x.begin(), x.end(), 1);
  }
  const double total = static_cast<double>(n) * trials;
  EXPECT_NEAR(ones, total / 2, 4 * std::sqrt(total * 0.25));
}

TEST(Pso, VelocityIsClamped) {
  RngStream rng(7);
  PsoParams params;
  params.inertia = 10;
  Genome x(50, 0);
  std::vector<double> v(50, 3.9);
  const Genome best(50, 1);
  for (int i = 0; i < 5; ++i) {
    pso_update(x, v, best, best, params, rng);
    for (double vi : v) ASSERT_LE(std::abs(vi), params.velocity_clamp);
  }
}

TEST(Scheduler, NoneReturnsAllAwake) {
  const Toy t = six_node_toy();
  RngStream rng(1);
  const auto r = run_scheduler(t.ctx, SchedulerConfig{}, rng);
  EXPECT_EQ(r.best.asleep, Genome(6, 0));
}

TEST(Scheduler, ParseAndValidate) {
  EXPECT_EQ(parse_scheduler("gso"), SchedulerAlgorithm::gso);
  EXPECT_EQ(parse_scheduler("none"), SchedulerAlgorithm::none);
  EXPECT_FALSE(parse_scheduler("eeca").has_value());
  SchedulerConfig cfg;
  cfg.population_size = 1;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.max_iterations = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.alpha = -0.1;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  EXPECT_DOUBLE_EQ(cfg.mutation_rate_for(300), 1.0 / 300.0);
}

}  // namespace
}  // namespace minen
