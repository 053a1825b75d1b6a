#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "minen/coverage.hpp"
#include "minen/rng.hpp"
#include "minen/types.hpp"

namespace minen {

/// One gene per alive node; 1 means the node sleeps this round.
using Genome = std::vector<std::uint8_t>;

struct SleepSolution {
  Genome asleep;
  double fitness = 0.0;
};

enum class SchedulerAlgorithm { none, gso, ga, pso };

std::string_view to_string(SchedulerAlgorithm a);
std::optional<SchedulerAlgorithm> parse_scheduler(std::string_view s);

struct PsoParams {
  double inertia = 0.7;
  double c1 = 1.5;
  double c2 = 1.5;
  double velocity_clamp = 4.0;
};

struct SchedulerConfig {
  SchedulerAlgorithm algorithm = SchedulerAlgorithm::none;
  double alpha = 0.34;
  double beta = 0.33;
  int max_iterations = 50;
  std::size_t population_size = 30;
  // Per-gene flip probability; absent means 1/n for n genes.
  std::optional<double> mutation_rate;
  // Replaces the coverage term by awake/total coverage.
  bool coverage_preserving = false;
  // Probability that a gene of the random initial population is asleep.
  double initial_sleep_probability = 0.5;
  PsoParams pso;

  void validate() const;
  double mutation_rate_for(std::size_t genes) const;
};

/// Fitness of sleep schedules over a fixed alive population. Totals are
/// taken over every alive node, regardless of its schedule.
class FitnessContext {
 public:
  FitnessContext(std::span<const NodeState> alive_nodes, const CoverageMap& map, double alpha,
                 double beta, bool coverage_preserving = false);

  std::size_t size() const { return ids_.size(); }
  std::span<const NodeId> ids() const { return ids_; }
  double total_energy() const { return total_energy_; }
  std::size_t total_coverage() const { return total_coverage_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  double awake_energy(const Genome& g) const;
  std::size_t awake_coverage(const Genome& g) const;

  /// alpha * (1 - awake_energy / total_energy) + beta * term2, where term2 is
  /// 1 - awake_cov / total_cov (or awake_cov / total_cov when coverage
  /// preserving). A zero denominator makes its term 0. Throws ContractError
  /// on a length mismatch.
  double operator()(const Genome& g) const;

 private:
  const CoverageMap* map_;
  std::vector<NodeId> ids_;
  std::vector<double> energies_;
  double alpha_;
  double beta_;
  bool coverage_preserving_;
  double total_energy_ = 0.0;
  std::size_t total_coverage_ = 0;
  mutable std::vector<std::uint64_t> scratch_;
};

double fitness(const Genome& g, const FitnessContext& ctx);

/// Flips every gene independently with probability `rate`.
void mutate(Genome& g, double rate, RngStream& rng);

/// Uniform crossover: each gene from `a` or `b` with probability 1/2.
Genome crossover(const Genome& a, const Genome& b, RngStream& rng);

Genome random_genome(std::size_t n, double sleep_probability, RngStream& rng);

struct ScheduleResult {
  SleepSolution best;
  double initial_best = 0.0;         // best fitness in the initial population
  double max_observed = 0.0;         // largest fitness ever evaluated
  std::vector<double> best_history;  // best fitness after each generation
  std::size_t evaluations = 0;
};

/// Genetic swarm optimization. Each generation sweeps the population in
/// index order: mutate, then cross over with the local best (probability
/// 1 - it/P) or else with the global best (probability it/P).
ScheduleResult gso_schedule(const FitnessContext& ctx, const SchedulerConfig& cfg, RngStream& rng);

/// Plain genetic algorithm: random parent pairs, mutate both, uniform
/// crossover; best-ever solution returned.
ScheduleResult ga_schedule(const FitnessContext& ctx, const SchedulerConfig& cfg, RngStream& rng);

/// Binary particle swarm with sigmoid velocities.
ScheduleResult pso_schedule(const FitnessContext& ctx, const SchedulerConfig& cfg, RngStream& rng);

/// One binary PSO move for a single particle, in place.
void pso_update(Genome& x, std::vector<double>& velocity, const Genome& personal_best,
                const Genome& global_best, const PsoParams& params, RngStream& rng);

/// Dispatches on cfg.algorithm. `none` returns the all-awake schedule.
ScheduleResult run_scheduler(const FitnessContext& ctx, const SchedulerConfig& cfg, RngStream& rng);

}  // namespace minen
