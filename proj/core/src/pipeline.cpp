#include "easyfilter/pipeline.hpp"

#include <algorithm>

#include "easyfilter/errors.hpp"

namespace easyfilter {

std::string_view name_of(Strategy s) noexcept {
  switch (s) {
    case Strategy::kNone: return "none";
    case Strategy::kSsb: return "ssb";
    case Strategy::kSsbCe: return "ssb-ce";
  }
  return "?";
}

Strategy parse_strategy(std::string_view s) {
  if (s == "none") return Strategy::kNone;
  if (s == "ssb" || s == "SSB") return Strategy::kSsb;
  if (s == "ssb-ce" || s == "SSB-CE") return Strategy::kSsbCe;
  throw ConfigError("unknown strategy '" + std::string(s) + "' (expected none, ssb or ssb-ce)");
}

std::string_view name_of(CurtailMode m) noexcept { return m == CurtailMode::kFixed ? "fixed" : "adaptive"; }

CurtailMode parse_curtail_mode(std::string_view s) {
  if (s == "fixed") return CurtailMode::kFixed;
  if (s == "adaptive") return CurtailMode::kAdaptive;
  throw ConfigError("unknown curtail mode '" + std::string(s) + "'");
}

void BudgetPolicy::validate() const {
  if (phi_h <= 0 || phi_as <= 0 || b_as <= 0 || b_h <= 0 || b_h_curtailed <= 0 || horizon <= 0) {
    throw ConfigError("budgets must be positive");
  }
  if (phi_h >= phi_as) throw ConfigError("phi_h must be below phi_as");
  if (b_h > b_as || b_h_curtailed > b_h) throw ConfigError("budgets must satisfy b_h_curtailed <= b_h <= b_as");
  if (horizon < b_as) throw ConfigError("horizon must cover b_as");
  if (phi_h != kProbeGenerations * population_of(SolverId::kCmaEs)) {
    throw ConfigError("phi_h must equal the SBS probe cost");
  }
  int full = 0;
  for (auto s : kPortfolio) full += kProbeGenerations * population_of(s);
  if (phi_as != full) throw ConfigError("phi_as must equal the cost of probing the whole portfolio");
  if (!(precision_target > 0)) throw ConfigError("precision_target must be positive");
}

int whole_generations(int evaluations, SolverId solver) noexcept {
  const int pop = population_of(solver);
  return evaluations <= 0 ? 0 : evaluations / pop * pop;
}

Hardness PerfectHardness::predict(const SampleKey& key, const ProbingTrajectory&) const {
  auto it = truth_.find(instance_of(key));
  if (it == truth_.end()) throw AuditError("no hardness label for " + to_string(key));
  return it->second;
}

SolverId VbsOracle::select(const SampleKey& key, const ConcatenatedTrajectory&) const {
  SolverId best = kPortfolio.front();
  double best_err = best_at(runs_.record(key, best), budget_);
  for (auto s : kPortfolio) {
    const double e = best_at(runs_.record(key, s), budget_);
    if (e < best_err) {
      best = s;
      best_err = e;
    }
  }
  return best;
}

void BudgetLedger::open_instance(int nominal) {
  if (nominal < 0) throw ContractError("negative nominal budget");
  nominal_ += nominal;
}

void BudgetLedger::spend(int evaluations) {
  if (evaluations < 0) throw ContractError("negative spend");
  spent_ += evaluations;
}

void BudgetLedger::credit(int evaluations) {
  if (evaluations < 0) throw ContractError("negative credit");
  pool_ += evaluations;
  credited_ += evaluations;
}

void BudgetLedger::forfeit(int evaluations) {
  if (evaluations < 0) throw ContractError("negative forfeit");
  forfeited_ += evaluations;
}

void BudgetLedger::grant(int evaluations) {
  if (evaluations < 0) throw ContractError("negative grant");
  if (evaluations > pool_) throw ContractError("grant exceeds the saved pool");
  pool_ -= evaluations;
  granted_ += evaluations;
}

void BudgetLedger::check() const {
  if (!conserved()) {
    throw AuditError("ledger out of balance: nominal " + std::to_string(nominal_) + " != spent " +
                     std::to_string(spent_) + " + granted " + std::to_string(granted_) + " + pool " +
                     std::to_string(pool_) + " + forfeited " + std::to_string(forfeited_));
  }
}

Pipeline::Pipeline(const RunSource& runs, const HardnessPredictor& hardness, const SolverSelector& selector,
                   BudgetPolicy policy, SolverId sbs, const HardnessTruth* truth)
    : runs_(runs), hardness_(hardness), selector_(selector), policy_(policy), sbs_(sbs), truth_(truth) {
  policy_.validate();
}

Assessment Pipeline::assess(const SampleKey& key) const {
  Assessment a;
  a.key = key;
  if (truth_) {
    auto it = truth_->find(instance_of(key));
    if (it != truth_->end()) a.truth = it->second;
  }
  ProbingTrajectory probe = prefix(runs_.record(key, sbs_), kProbeGenerations);
  a.verdict = hardness_.predict(key, probe);
  if (a.verdict == Hardness::kEasy) {
    a.chosen = sbs_;
    a.probe_cost = policy_.phi_h;
    return a;
  }
  std::array<ProbingTrajectory, 3> parts;
  for (auto s : kPortfolio) {
    parts[static_cast<std::size_t>(index_of(s))] =
        s == sbs_ ? probe : prefix(runs_.record(key, s), kProbeGenerations);
  }
  const ConcatenatedTrajectory full = concat(std::move(parts[0]), std::move(parts[1]), std::move(parts[2]));
  a.probe_cost = full.total_cost;
  try {
    a.chosen = selector_.select(key, full);
  } catch (const Error&) {
    a.chosen = sbs_;
    a.selector_fallback = true;
  }
  return a;
}

int Pipeline::easy_budget(const RunRecord& sbs_run) const {
  if (policy_.strategy != Strategy::kSsbCe) return policy_.b_h;
  if (policy_.curtail == CurtailMode::kFixed) return policy_.b_h_curtailed;
  const int pop = sbs_run.config.population;
  const int cap = policy_.b_h_curtailed / pop;
  for (int g = 0; g < std::min(cap, sbs_run.generations()); ++g) {
    if (sbs_run.best_so_far[static_cast<std::size_t>(g)] < policy_.precision_target) return (g + 1) * pop;
  }
  return cap * pop;
}

PipelineOutcome Pipeline::finish(const Assessment& a, BudgetLedger& ledger, int grant) const {
  if (grant < 0) throw ContractError("grant must be non-negative");
  PipelineOutcome o;
  o.key = a.key;
  o.verdict = a.verdict;
  o.truth = a.truth;
  o.chosen = a.chosen;
  o.selector_fallback = a.selector_fallback;
  o.probe_cost = a.probe_cost;
  // Validate before touching the ledger so a rejected call leaves it unchanged.
  if (a.verdict == Hardness::kEasy) {
    if (grant != 0) throw ContractError("easy verdicts take no extension");
  } else {
    if (grant > policy_.max_grant()) throw ContractError("grant exceeds the recorded horizon");
    if (grant % population_of(a.chosen) != 0) throw ContractError("grant must be whole generations of the chosen solver");
    if (grant > ledger.pool()) throw ContractError("grant exceeds the saved pool");
  }
  ledger.open_instance(policy_.nominal());

  if (a.verdict == Hardness::kEasy) {
    const RunRecord& run = runs_.record(a.key, sbs_);
    o.solve_budget = easy_budget(run);
    o.final_error = best_at(run, o.solve_budget);
    ledger.spend(o.probe_cost + o.solve_budget);
    o.saved = policy_.nominal() - o.probe_cost - o.solve_budget;
    if (policy_.strategy == Strategy::kNone) {
      ledger.forfeit(o.saved);
    } else {
      ledger.credit(o.saved);
    }
    return o;
  }

  const RunRecord& run = runs_.record(a.key, a.chosen);
  o.solve_budget = policy_.b_as;
  o.extension = grant;
  o.final_error = best_at(run, o.solve_budget + grant);
  ledger.spend(o.probe_cost + o.solve_budget);
  ledger.grant(grant);
  return o;
}

}  // namespace easyfilter
