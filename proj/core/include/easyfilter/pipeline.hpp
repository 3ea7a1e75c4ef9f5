#pragma once

#include <optional>
#include <string>
#include <vector>

#include "easyfilter/archive.hpp"
#include "easyfilter/models.hpp"

namespace easyfilter {

enum class Strategy { kNone, kSsb, kSsbCe };
std::string_view name_of(Strategy s) noexcept;
Strategy parse_strategy(std::string_view s);

// Fixed-cut stops every easy run at the curtailed budget; adaptive stops at
// the first generation below the precision target when that comes earlier.
enum class CurtailMode { kFixed, kAdaptive };
std::string_view name_of(CurtailMode m) noexcept;
CurtailMode parse_curtail_mode(std::string_view s);

struct BudgetPolicy {
  int phi_h = 70;
  int phi_as = 560;
  int b_as = 4000;
  int b_h = 4000;
  int b_h_curtailed = 2700;
  double precision_target = 1e-7;
  int horizon = 6000;
  Strategy strategy = Strategy::kNone;
  CurtailMode curtail = CurtailMode::kFixed;

  /// Throws ConfigError.
  void validate() const;
  /// Budget reserved per instance: full probe plus selector-path solve.
  int nominal() const noexcept { return phi_as + b_as; }
  /// Largest extension a single run can absorb within the recorded horizon.
  int max_grant() const noexcept { return horizon - b_as; }
};

/// Supplies the recorded run of a solver on a sample.
class RunSource {
 public:
  virtual ~RunSource() = default;
  virtual const RunRecord& record(const SampleKey& key, SolverId solver) const = 0;
};

class ArchiveSource final : public RunSource {
 public:
  explicit ArchiveSource(const RunArchive& archive) : archive_(archive) {}
  const RunRecord& record(const SampleKey& key, SolverId solver) const override { return archive_.at(key, solver); }

 private:
  const RunArchive& archive_;
};

class HardnessPredictor {
 public:
  virtual ~HardnessPredictor() = default;
  virtual Hardness predict(const SampleKey& key, const ProbingTrajectory& probe) const = 0;
};

class TrainedHardness final : public HardnessPredictor {
 public:
  explicit TrainedHardness(const TrainedModel& model) : model_(model) {}
  Hardness predict(const SampleKey&, const ProbingTrajectory& probe) const override {
    return predict_hardness(model_, probe);
  }

 private:
  const TrainedModel& model_;
};

/// Returns the ground-truth label; throws AuditError for unlabeled instances.
class PerfectHardness final : public HardnessPredictor {
 public:
  explicit PerfectHardness(const HardnessTruth& truth) : truth_(truth) {}
  Hardness predict(const SampleKey& key, const ProbingTrajectory&) const override;

 private:
  const HardnessTruth& truth_;
};

/// Disables the filter: every instance takes the selector path.
class AlwaysHard final : public HardnessPredictor {
 public:
  Hardness predict(const SampleKey&, const ProbingTrajectory&) const override { return Hardness::kHard; }
};

class SolverSelector {
 public:
  virtual ~SolverSelector() = default;
  virtual SolverId select(const SampleKey& key, const ConcatenatedTrajectory& probe) const = 0;
};

class TrainedSelector final : public SolverSelector {
 public:
  explicit TrainedSelector(const TrainedModel& model) : model_(model) {}
  SolverId select(const SampleKey&, const ConcatenatedTrajectory& probe) const override {
    return predict_solver(model_, probe);
  }

 private:
  const TrainedModel& model_;
};

// Per-sample oracle: the solver whose matched-seed run has the lowest error
// at `budget`, ties in portfolio order.
class VbsOracle final : public SolverSelector {
 public:
  VbsOracle(const RunSource& runs, int budget) : runs_(runs), budget_(budget) {}
  SolverId select(const SampleKey& key, const ConcatenatedTrajectory&) const override;

 private:
  const RunSource& runs_;
  int budget_;
};

class FixedSelector final : public SolverSelector {
 public:
  explicit FixedSelector(SolverId solver) : solver_(solver) {}
  SolverId select(const SampleKey&, const ConcatenatedTrajectory&) const override { return solver_; }

 private:
  SolverId solver_;
};

/// Verdict and choice for one sample before any budget is committed.
struct Assessment {
  SampleKey key;
  Hardness verdict = Hardness::kHard;
  std::optional<Hardness> truth;
  SolverId chosen = SolverId::kCmaEs;
  bool selector_fallback = false;
  int probe_cost = 0;
};

struct PipelineOutcome {
  SampleKey key;
  Hardness verdict = Hardness::kHard;
  std::optional<Hardness> truth;
  SolverId chosen = SolverId::kCmaEs;
  bool selector_fallback = false;
  int probe_cost = 0;
  /// Evaluations of the chosen run, probe prefix included, excluding the extension.
  int solve_budget = 0;
  int extension = 0;
  /// Budget an easy verdict released: credited to the pool or forfeited.
  int saved = 0;
  double final_error = 0;
};

// Integer budget accounting. Every instance reserves nominal(); it is either
// spent (probes plus base solve budget), granted as an extension, still
// pooled, or forfeited because the strategy does not re-allocate.
class BudgetLedger {
 public:
  long long nominal() const noexcept { return nominal_; }
  long long spent() const noexcept { return spent_; }
  long long granted() const noexcept { return granted_; }
  long long pool() const noexcept { return pool_; }
  long long forfeited() const noexcept { return forfeited_; }
  long long credited() const noexcept { return credited_; }

  void open_instance(int nominal);
  void spend(int evaluations);
  void credit(int evaluations);
  void forfeit(int evaluations);
  /// Removes a grant from the pool; throws ContractError when the pool is short.
  void grant(int evaluations);

  bool conserved() const noexcept { return nominal_ == spent_ + granted_ + pool_ + forfeited_; }
  /// Throws AuditError when conservation fails.
  void check() const;

 private:
  long long nominal_ = 0, spent_ = 0, granted_ = 0, pool_ = 0, forfeited_ = 0, credited_ = 0;
};

class Pipeline {
 public:
  Pipeline(const RunSource& runs, const HardnessPredictor& hardness, const SolverSelector& selector,
           BudgetPolicy policy, SolverId sbs = SolverId::kCmaEs, const HardnessTruth* truth = nullptr);

  const BudgetPolicy& policy() const noexcept { return policy_; }
  SolverId sbs() const noexcept { return sbs_; }

  /// Probes and decides; a throwing selector falls back to the SBS.
  Assessment assess(const SampleKey& key) const;

  // Solves the assessed sample, updating the ledger. `grant` must be a whole
  // number of generations of the chosen solver and only applies to hard
  // verdicts.
  PipelineOutcome finish(const Assessment& a, BudgetLedger& ledger, int grant = 0) const;

  PipelineOutcome process_instance(const SampleKey& key, BudgetLedger& ledger, int grant = 0) const {
    return finish(assess(key), ledger, grant);
  }

  /// Solve budget of an easy verdict on this sample under the policy.
  int easy_budget(const RunRecord& sbs_run) const;

 private:
  const RunSource& runs_;
  const HardnessPredictor& hardness_;
  const SolverSelector& selector_;
  BudgetPolicy policy_;
  SolverId sbs_;
  const HardnessTruth* truth_;
};

/// Largest multiple of the solver's population not above `evaluations`.
int whole_generations(int evaluations, SolverId solver) noexcept;

}  // namespace easyfilter
