#include "easyfilter/trajectory.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "easyfilter/errors.hpp"

namespace easyfilter {

std::vector<double> ConcatenatedTrajectory::values() const {
  std::vector<double> out;
  for (const auto& p : parts) out.insert(out.end(), p.values.begin(), p.values.end());
  return out;
}

std::vector<double> signed_log(std::span<const double> values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) {
    if (!std::isfinite(v)) throw DataError("non-finite trajectory value");
    out.push_back(std::copysign(std::log10(1.0 + std::abs(v)), v));
  }
  return out;
}

std::vector<double> normalize(std::span<const double> values) {
  if (values.empty()) throw DataError("cannot normalize an empty trajectory");
  std::vector<double> out = signed_log(values);
  const auto n = static_cast<double>(out.size());
  const double mean = std::accumulate(out.begin(), out.end(), 0.0) / n;
  double var = 0.0;
  for (double v : out) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / n);
  if (sd < 1e-12) return std::vector<double>(out.size(), 0.0);
  for (double& v : out) v = (v - mean) / sd;
  return out;
}

ConcatenatedTrajectory concat(ProbingTrajectory cma, ProbingTrajectory de, ProbingTrajectory pso) {
  if (cma.solver != SolverId::kCmaEs || de.solver != SolverId::kDe || pso.solver != SolverId::kPso) {
    throw ContractError("probes must be given in portfolio order (cmaes, de, pso)");
  }
  if (cma.values.empty() || cma.values.size() != de.values.size() || de.values.size() != pso.values.size()) {
    throw ContractError("probes must be non-empty and of equal length");
  }
  ConcatenatedTrajectory out;
  out.total_cost = cma.evaluations_cost + de.evaluations_cost + pso.evaluations_cost;
  out.parts = {std::move(cma), std::move(de), std::move(pso)};
  return out;
}

int incremental_cost(const ConcatenatedTrajectory& traj, SolverId prober) {
  return traj.total_cost - traj.parts[static_cast<std::size_t>(index_of(prober))].evaluations_cost;
}

}  // namespace easyfilter
