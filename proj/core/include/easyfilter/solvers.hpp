#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "easyfilter/solver_id.hpp"
#include "easyfilter/suite.hpp"
#include "easyfilter/trajectory.hpp"

namespace easyfilter {

struct SolverConfig {
  SolverId solver = SolverId::kCmaEs;
  int population = population_of(SolverId::kCmaEs);
  std::uint64_t seed = 0;
  /// Horizon H; a whole number of generations.
  int max_evaluations = 0;
  /// Stop after the first generation whose best-so-far error drops below this.
  std::optional<double> stop_below;

  static SolverConfig make(SolverId solver, std::uint64_t seed, int max_evaluations);
  /// Throws ContractError when the population does not match the solver or the
  /// horizon is not a positive whole number of generations.
  void validate() const;

  bool operator==(const SolverConfig&) const = default;
};

/// Best-so-far error after every completed generation of one run.
struct RunRecord {
  FunctionId function{};
  int instance_seed = 0;
  int dimension = 0;
  SolverConfig config;
  std::vector<double> best_so_far;
  int evaluations_used = 0;

  int generations() const noexcept { return static_cast<int>(best_so_far.size()); }
  bool operator==(const RunRecord&) const = default;
};

/// A generation-based minimizer bound to one instance.
class Optimizer {
 public:
  virtual ~Optimizer() = default;
  /// Evaluates one full generation; returns the smallest error seen in it.
  virtual double step() = 0;
  virtual int population() const noexcept = 0;
};

std::unique_ptr<Optimizer> make_optimizer(const ProblemInstance& inst, SolverId solver, std::uint64_t seed);

// Deterministic in (inst, config). A longer horizon replays the shorter run
// exactly, so records can be extended by re-running from the seed.
RunRecord run(const ProblemInstance& inst, const SolverConfig& config);

// Best-so-far error after floor(evaluations / population) generations.
// Throws ContractError for evaluations below one generation and
// OutOfHorizonError past the recorded horizon.
double best_at(const RunRecord& record, int evaluations);

/// First `generations` entries as a probing trajectory.
ProbingTrajectory prefix(const RunRecord& record, int generations);

}  // namespace easyfilter
