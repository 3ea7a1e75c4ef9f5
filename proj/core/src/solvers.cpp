#include "easyfilter/solvers.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "easyfilter/errors.hpp"

namespace easyfilter {

// Defined alongside each algorithm.
std::unique_ptr<Optimizer> make_cmaes(const ProblemInstance& inst, std::uint64_t seed);
std::unique_ptr<Optimizer> make_differential_evolution(const ProblemInstance& inst, std::uint64_t seed);
std::unique_ptr<Optimizer> make_particle_swarm(const ProblemInstance& inst, std::uint64_t seed);

SolverId parse_solver(std::string_view name) {
  for (auto s : kPortfolio) {
    if (name_of(s) == name) return s;
  }
  if (name == "cma-es" || name == "CMA-ES") return SolverId::kCmaEs;
  if (name == "DE") return SolverId::kDe;
  if (name == "PSO") return SolverId::kPso;
  throw ConfigError("unknown solver '" + std::string(name) + "'");
}

SolverConfig SolverConfig::make(SolverId solver, std::uint64_t seed, int max_evaluations) {
  SolverConfig c;
  c.solver = solver;
  c.population = population_of(solver);
  c.seed = seed;
  c.max_evaluations = max_evaluations;
  return c;
}

void SolverConfig::validate() const {
  if (population != population_of(solver)) {
    throw ContractError(std::string(name_of(solver)) + " population must be " +
                        std::to_string(population_of(solver)));
  }
  if (max_evaluations < population) {
    throw ContractError("budget below one generation yields an empty record");
  }
  if (max_evaluations % population != 0) {
    throw ContractError("max_evaluations must be a whole number of generations");
  }
}

std::unique_ptr<Optimizer> make_optimizer(const ProblemInstance& inst, SolverId solver, std::uint64_t seed) {
  switch (solver) {
    case SolverId::kCmaEs: return make_cmaes(inst, seed);
    case SolverId::kDe: return make_differential_evolution(inst, seed);
    case SolverId::kPso: return make_particle_swarm(inst, seed);
  }
  throw ContractError("unknown solver");
}

RunRecord run(const ProblemInstance& inst, const SolverConfig& config) {
  config.validate();
  RunRecord rec;
  rec.function = inst.function();
  rec.instance_seed = inst.instance_seed();
  rec.dimension = inst.dimension();
  rec.config = config;

  auto opt = make_optimizer(inst, config.solver, config.seed);
  const int generations = config.max_evaluations / config.population;
  rec.best_so_far.reserve(static_cast<std::size_t>(generations));
  double best = std::numeric_limits<double>::infinity();
  for (int g = 0; g < generations; ++g) {
    best = std::min(best, opt->step());
    rec.best_so_far.push_back(best);
    rec.evaluations_used += config.population;
    if (config.stop_below && best < *config.stop_below) break;
  }
  return rec;
}

double best_at(const RunRecord& record, int evaluations) {
  const int gens = evaluations / record.config.population;
  if (evaluations <= 0 || gens == 0) {
    throw ContractError("best_at needs at least one generation of evaluations");
  }
  if (gens > record.generations()) {
    throw OutOfHorizonError("query at " + std::to_string(evaluations) + " evaluations exceeds the " +
                            std::to_string(record.evaluations_used) + " recorded");
  }
  return record.best_so_far[static_cast<std::size_t>(gens - 1)];
}

ProbingTrajectory prefix(const RunRecord& record, int generations) {
  if (generations <= 0) throw ContractError("prefix needs at least one generation");
  if (generations > record.generations()) {
    throw OutOfHorizonError("prefix of " + std::to_string(generations) + " generations requested from a record of " +
                        std::to_string(record.generations()));
  }
  ProbingTrajectory t;
  t.solver = record.config.solver;
  t.values.assign(record.best_so_far.begin(), record.best_so_far.begin() + generations);
  t.evaluations_cost = generations * record.config.population;
  return t;
}

}  // namespace easyfilter
