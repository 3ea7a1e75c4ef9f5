#pragma once

#include <filesystem>
#include <map>
#include <random>
#include <string>

#include "easyfilter/pipeline.hpp"

namespace easyfilter::testing {

// Record whose best-so-far error is `start` until generation `drop_at`
// (1-based) and `end` from then on, over the full horizon.
inline RunRecord step_record(SolverId solver, double start, double end, int drop_at, int horizon = 6000) {
  RunRecord r;
  r.config = SolverConfig::make(solver, 0, horizon);
  r.dimension = 10;
  const int gens = horizon / r.config.population;
  for (int g = 1; g <= gens; ++g) r.best_so_far.push_back(g < drop_at ? start : end);
  r.evaluations_used = horizon;
  return r;
}

/// Record with a geometric decay per generation.
inline RunRecord decay_record(SolverId solver, double start, double factor, int horizon = 6000) {
  RunRecord r;
  r.config = SolverConfig::make(solver, 0, horizon);
  r.dimension = 10;
  const int gens = horizon / r.config.population;
  double v = start;
  for (int g = 0; g < gens; ++g, v *= factor) r.best_so_far.push_back(v);
  r.evaluations_used = horizon;
  return r;
}

class FakeRuns final : public RunSource {
 public:
  const RunRecord& record(const SampleKey& key, SolverId solver) const override { return archive.at(key, solver); }
  RunArchive archive;
};

// Sample with a CMA-ES run that is easy (below 1e-7 by 2,000 evaluations) or
// hard (stuck at `level`), and DE/PSO runs stuck at the given levels.
inline void add_sample(FakeRuns& runs, const SampleKey& key, bool easy, double cma_level = 1.0, double de_level = 2.0,
                       double pso_level = 3.0) {
  runs.archive.insert({key, SolverId::kCmaEs},
                      easy ? step_record(SolverId::kCmaEs, 10.0, 0.0, 200) : decay_record(SolverId::kCmaEs, cma_level, 0.999));
  runs.archive.insert({key, SolverId::kDe}, decay_record(SolverId::kDe, de_level, 0.999));
  runs.archive.insert({key, SolverId::kPso}, decay_record(SolverId::kPso, pso_level, 0.999));
}

/// Predicts hardness from a lookup on the instance.
class TableHardness final : public HardnessPredictor {
 public:
  explicit TableHardness(std::map<SampleKey, Hardness> table) : table_(std::move(table)) {}
  Hardness predict(const SampleKey& key, const ProbingTrajectory&) const override { return table_.at(key); }

 private:
  std::map<SampleKey, Hardness> table_;
};

class ThrowingSelector final : public SolverSelector {
 public:
  SolverId select(const SampleKey&, const ConcatenatedTrajectory&) const override {
    throw DataError("selector unavailable");
  }
};

inline BudgetPolicy policy(Strategy s) {
  BudgetPolicy p;
  p.strategy = s;
  return p;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("easyfilter-" + tag + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace easyfilter::testing
