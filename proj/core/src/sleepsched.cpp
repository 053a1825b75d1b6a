#include "minen/sleepsched.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "minen/error.hpp"

namespace minen {

std::string_view to_string(SchedulerAlgorithm a) {
  switch (a) {
    case SchedulerAlgorithm::none: return "none";
    case SchedulerAlgorithm::gso: return "gso";
    case SchedulerAlgorithm::ga: return "ga";
    case SchedulerAlgorithm::pso: return "pso";
  }
  return "none";
}

std::optional<SchedulerAlgorithm> parse_scheduler(std::string_view s) {
  if (s == "none") return SchedulerAlgorithm::none;
  if (s == "gso") return SchedulerAlgorithm::gso;
  if (s == "ga") return SchedulerAlgorithm::ga;
  if (s == "pso") return SchedulerAlgorithm::pso;
  return std::nullopt;
}

void SchedulerConfig::validate() const {
  if (!(alpha >= 0.0) || !(beta >= 0.0)) {
    throw ConfigError("scheduler alpha and beta must be non-negative");
  }
  if (max_iterations < 1) {
    throw ConfigError("scheduler max_iterations must be at least 1");
  }
  if (population_size < 2) {
    throw ConfigError("scheduler population_size must be at least 2");
  }
  if (mutation_rate && !(*mutation_rate >= 0.0 && *mutation_rate <= 1.0)) {
    throw ConfigError("scheduler mutation_rate must lie in [0, 1]");
  }
  if (!(initial_sleep_probability >= 0.0 && initial_sleep_probability <= 1.0)) {
    throw ConfigError("scheduler initial_sleep_probability must lie in [0, 1]");
  }
  if (!(pso.velocity_clamp > 0.0)) {
    throw ConfigError("pso velocity_clamp must be positive");
  }
}

double SchedulerConfig::mutation_rate_for(std::size_t genes) const {
  if (mutation_rate) {
    return *mutation_rate;
  }
  return genes == 0 ? 0.0 : 1.0 / static_cast<double>(genes);
}

FitnessContext::FitnessContext(std::span<const NodeState> alive_nodes, const CoverageMap& map,
                               double alpha, double beta, bool coverage_preserving)
    : map_(&map), alpha_(alpha), beta_(beta), coverage_preserving_(coverage_preserving) {
  for (const auto& n : alive_nodes) {
    if (!n.alive) {
      continue;
    }
    if (n.id >= map.node_count()) {
      throw ContractError("FitnessContext: node id outside the coverage map");
    }
    ids_.push_back(n.id);
    energies_.push_back(n.energy);
    total_energy_ += n.energy;
  }
  scratch_.assign(map.words_per_node(), 0);
  total_coverage_ = map.union_count(ids_);
}

double FitnessContext::awake_energy(const Genome& g) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (g[i] == 0) {
      sum += energies_[i];
    }
  }
  return sum;
}

std::size_t FitnessContext::awake_coverage(const Genome& g) const {
  return map_->masked_union_count(ids_, g, scratch_);
}

double FitnessContext::operator()(const Genome& g) const {
  if (g.size() != ids_.size()) {
    throw ContractError("fitness: schedule length " + std::to_string(g.size()) +
                        " does not match alive population " + std::to_string(ids_.size()));
  }
  double term1 = 0.0;
  if (total_energy_ > 0.0) {
    term1 = std::clamp(1.0 - awake_energy(g) / total_energy_, 0.0, 1.0);
  }
  double term2 = 0.0;
  if (total_coverage_ > 0) {
    const double ratio =
        static_cast<double>(awake_coverage(g)) / static_cast<double>(total_coverage_);
    term2 = coverage_preserving_ ? ratio : 1.0 - ratio;
  }
  return alpha_ * term1 + beta_ * term2;
}

double fitness(const Genome& g, const FitnessContext& ctx) { return ctx(g); }

void mutate(Genome& g, double rate, RngStream& rng) {
  if (rate <= 0.0) {
    return;
  }
  if (rate >= 1.0) {
    for (auto& gene : g) {
      gene ^= 1;
    }
    return;
  }
  // Gaps between flips are geometric, so one draw per flipped gene gives the
  // same independent per-gene Bernoulli(rate) outcome as one draw per gene.
  const double log_keep = std::log1p(-rate);
  std::size_t i = 0;
  while (true) {
    const double gap = std::floor(std::log1p(-rng.uniform()) / log_keep);
    if (gap >= static_cast<double>(g.size() - i)) {
      return;
    }
    i += static_cast<std::size_t>(gap);
    g[i] ^= 1;
    ++i;
  }
}

Genome crossover(const Genome& a, const Genome& b, RngStream& rng) {
  if (a.size() != b.size()) {
    throw ContractError("crossover: parents differ in length");
  }
  Genome child(a.size());
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i % 64 == 0) {
      bits = rng.next_u64();
    }
    child[i] = ((bits >> (i % 64)) & 1U) != 0 ? b[i] : a[i];
  }
  return child;
}

Genome random_genome(std::size_t n, double sleep_probability, RngStream& rng) {
  Genome g(n);
  for (auto& gene : g) {
    gene = rng.uniform() < sleep_probability ? 1 : 0;
  }
  return g;
}

namespace {

// Evaluates and tracks the maximum fitness ever seen.
struct Evaluator {
  const FitnessContext& ctx;
  ScheduleResult& result;

  double operator()(const Genome& g) {
    const double f = ctx(g);
    if (result.evaluations == 0 || f > result.max_observed) {
      result.max_observed = f;
    }
    ++result.evaluations;
    return f;
  }
};

std::vector<SleepSolution> initial_population(const FitnessContext& ctx,
                                              const SchedulerConfig& cfg, RngStream& rng,
                                              Evaluator& eval) {
  std::vector<SleepSolution> pop(cfg.population_size);
  for (auto& s : pop) {
    s.asleep = random_genome(ctx.size(), cfg.initial_sleep_probability, rng);
    s.fitness = eval(s.asleep);
  }
  return pop;
}

const SleepSolution& best_of(const std::vector<SleepSolution>& pop) {
  return *std::max_element(pop.begin(), pop.end(), [](const auto& a, const auto& b) {
    return a.fitness < b.fitness;
  });
}

}  // namespace

ScheduleResult gso_schedule(const FitnessContext& ctx, const SchedulerConfig& cfg,
                            RngStream& rng) {
  cfg.validate();
  ScheduleResult result;
  Evaluator eval{ctx, result};
  auto pop = initial_population(ctx, cfg, rng, eval);
  const double rate = cfg.mutation_rate_for(ctx.size());
  const double max_solutions = static_cast<double>(pop.size());

  SleepSolution global_best = best_of(pop);
  SleepSolution local_best = pop.front();
  result.initial_best = global_best.fitness;

  for (int gen = 0; gen < cfg.max_iterations; ++gen) {
    for (std::size_t it = 0; it < pop.size(); ++it) {
      SleepSolution& current = pop[it];
      mutate(current.asleep, rate, rng);
      const double crossover_rate_1 = 1.0 - static_cast<double>(it) / max_solutions;
      const double crossover_rate_2 = static_cast<double>(it) / max_solutions;
      if (rng.uniform() < crossover_rate_1) {
        current.asleep = crossover(current.asleep, local_best.asleep, rng);
      } else if (rng.uniform() < crossover_rate_2) {
        current.asleep = crossover(current.asleep, global_best.asleep, rng);
      }
      current.fitness = eval(current.asleep);
      if (current.fitness > local_best.fitness) {
        local_best = current;
        if (local_best.fitness > global_best.fitness) {
          global_best = local_best;
        }
      }
    }
    result.best_history.push_back(global_best.fitness);
  }
  result.best = std::move(global_best);
  return result;
}

ScheduleResult ga_schedule(const FitnessContext& ctx, const SchedulerConfig& cfg,
                           RngStream& rng) {
  cfg.validate();
  ScheduleResult result;
  Evaluator eval{ctx, result};
  auto pop = initial_population(ctx, cfg, rng, eval);
  const double rate = cfg.mutation_rate_for(ctx.size());

  SleepSolution best = best_of(pop);
  result.initial_best = best.fitness;

  std::vector<SleepSolution> next(pop.size());
  for (int gen = 0; gen < cfg.max_iterations; ++gen) {
    for (auto& child : next) {
      const std::size_t i = rng.index(pop.size());
      std::size_t j = rng.index(pop.size() - 1);
      if (j >= i) {
        ++j;
      }
      Genome a = pop[i].asleep;
      Genome b = pop[j].asleep;
      mutate(a, rate, rng);
      mutate(b, rate, rng);
      child.asleep = crossover(a, b, rng);
      child.fitness = eval(child.asleep);
      if (child.fitness > best.fitness) {
        best = child;
      }
    }
    std::swap(pop, next);
    result.best_history.push_back(best.fitness);
  }
  result.best = std::move(best);
  return result;
}

void pso_update(Genome& x, std::vector<double>& velocity, const Genome& personal_best,
                const Genome& global_best, const PsoParams& params, RngStream& rng) {
  if (velocity.size() != x.size() || personal_best.size() != x.size() ||
      global_best.size() != x.size()) {
    throw ContractError("pso_update: particle vectors differ in length");
  }
  for (std::size_t d = 0; d < x.size(); ++d) {
    const double xd = x[d];
    const double r1 = rng.uniform();
    const double r2 = rng.uniform();
    double v = params.inertia * velocity[d] + params.c1 * r1 * (personal_best[d] - xd) +
               params.c2 * r2 * (global_best[d] - xd);
    v = std::clamp(v, -params.velocity_clamp, params.velocity_clamp);
    velocity[d] = v;
    const double p = 1.0 / (1.0 + std::exp(-v));
    x[d] = rng.uniform() < p ? 1 : 0;
  }
}

ScheduleResult pso_schedule(const FitnessContext& ctx, const SchedulerConfig& cfg,
                            RngStream& rng) {
  cfg.validate();
  ScheduleResult result;
  Evaluator eval{ctx, result};
  auto particles = initial_population(ctx, cfg, rng, eval);
  std::vector<SleepSolution> personal = particles;
  std::vector<std::vector<double>> velocity(particles.size(),
                                            std::vector<double>(ctx.size(), 0.0));
  SleepSolution global_best = best_of(particles);
  result.initial_best = global_best.fitness;

  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    for (std::size_t p = 0; p < particles.size(); ++p) {
      pso_update(particles[p].asleep, velocity[p], personal[p].asleep, global_best.asleep,
                 cfg.pso, rng);
      particles[p].fitness = eval(particles[p].asleep);
      if (particles[p].fitness > personal[p].fitness) {
        personal[p] = particles[p];
        if (personal[p].fitness > global_best.fitness) {
          global_best = personal[p];
        }
      }
    }
    result.best_history.push_back(global_best.fitness);
  }
  result.best = std::move(global_best);
  return result;
}

ScheduleResult run_scheduler(const FitnessContext& ctx, const SchedulerConfig& cfg,
                             RngStream& rng) {
  switch (cfg.algorithm) {
    case SchedulerAlgorithm::gso: return gso_schedule(ctx, cfg, rng);
    case SchedulerAlgorithm::ga: return ga_schedule(ctx, cfg, rng);
    case SchedulerAlgorithm::pso: return pso_schedule(ctx, cfg, rng);
    case SchedulerAlgorithm::none: break;
  }
  ScheduleResult result;
  result.best.asleep.assign(ctx.size(), 0);
  result.best.fitness = ctx(result.best.asleep);
  result.initial_best = result.best.fitness;
  result.max_observed = result.best.fitness;
  result.evaluations = 1;
  return result;
}

}  // namespace minen
