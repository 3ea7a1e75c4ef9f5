#pragma once

#include <array>
#include <span>
#include <vector>

#include "easyfilter/solver_id.hpp"

namespace easyfilter {

inline constexpr int kProbeGenerations = 7;

/// Best-so-far error per generation over the first generations of one run.
struct ProbingTrajectory {
  SolverId solver = SolverId::kCmaEs;
  std::vector<double> values;
  int evaluations_cost = 0;
};

/// Probes of the whole portfolio in the fixed order (CMA-ES, DE, PSO).
struct ConcatenatedTrajectory {
  std::array<ProbingTrajectory, 3> parts;
  int total_cost = 0;

  /// Flattened values, CMA-ES first.
  std::vector<double> values() const;
};

/// slog(v) = sign(v) * log10(1 + |v|), elementwise.
std::vector<double> signed_log(std::span<const double> values);

// Signed log followed by per-trajectory standardization to zero mean and unit
// variance. Trajectories whose signed-log spread is below 1e-12 map to zeros.
// Throws DataError on empty or non-finite input.
std::vector<double> normalize(std::span<const double> values);

// Requires the three probes in portfolio order with equal lengths; throws
// ContractError otherwise.
ConcatenatedTrajectory concat(ProbingTrajectory cma, ProbingTrajectory de, ProbingTrajectory pso);

/// Evaluations the selector stage adds on top of the prober's own probe.
int incremental_cost(const ConcatenatedTrajectory& traj, SolverId prober = SolverId::kCmaEs);

}  // namespace easyfilter
