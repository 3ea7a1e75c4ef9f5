#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "easyfilter/archive.hpp"
#include "easyfilter/config.hpp"
#include "easyfilter/metrics.hpp"
#include "easyfilter/models.hpp"
#include "easyfilter/pipeline.hpp"
#include "easyfilter/scheduler.hpp"

namespace easyfilter::cli {

// <output_dir>/runs and <output_dir>/labels are shared by every seed;
// everything downstream of the splits lives under <output_dir>/seed-<n>.
struct Paths {
  std::filesystem::path root;

  std::filesystem::path labels() const { return root / "labels"; }
  std::filesystem::path seed_dir(std::uint64_t seed) const { return root / ("seed-" + std::to_string(seed)); }
  std::filesystem::path splits(std::uint64_t seed) const { return seed_dir(seed) / "splits"; }
  std::filesystem::path models(std::uint64_t seed) const { return seed_dir(seed) / "models"; }
  std::filesystem::path outcomes(std::uint64_t seed) const { return seed_dir(seed) / "outcomes"; }
  std::filesystem::path reports(std::uint64_t seed) const { return seed_dir(seed) / "reports"; }
};

inline Paths paths_of(const ExperimentConfig& c) { return Paths{c.output_dir}; }

struct GenerateResult {
  DatasetManifest manifest;
  std::size_t produced = 0;
};

GenerateResult cmd_generate(const ExperimentConfig& config, std::ostream& log);
RunArchive open_archive(const ExperimentConfig& config);

struct LabelSet {
  std::vector<HardnessLabel> hardness;
  std::vector<BestSolverLabel> best_solver;
  SolverId sbs = SolverId::kCmaEs;
  HardnessTruth truth;
};

LabelSet cmd_label(const ExperimentConfig& config, const RunArchive& archive, std::ostream& log);
/// Throws IncompleteArchiveError when the label files are missing.
LabelSet load_labels(const ExperimentConfig& config);

struct SplitModels {
  Split split;
  TrainedModel hardness;
  TrainedModel selector;
  Evaluation hardness_eval;
  Evaluation selector_eval;
};

struct TrainingResult {
  std::vector<SplitModels> splits;
  std::size_t median_hardness = 0;
  std::size_t median_selector = 0;
};

TrainingResult cmd_train(const ExperimentConfig& config, std::uint64_t seed, const RunArchive& archive,
                         const LabelSet& labels, std::ostream& log);
/// Reads splits and models back; evaluations are recomputed on the archive.
TrainingResult load_training(const ExperimentConfig& config, std::uint64_t seed, const RunArchive& archive,
                             const LabelSet& labels);

/// One evaluated trace: which selector, setting and strategy on which split.
struct RunName {
  SelectorKind selector = SelectorKind::kVbs;
  Setting setting = Setting::kBatch;
  Strategy strategy = Strategy::kNone;
  int split = 1;

  auto operator<=>(const RunName&) const = default;
  std::string file_stem() const;
};

std::optional<RunName> parse_run_name(const std::string& stem);

struct TraceRow {
  PipelineOutcome outcome;
  double vbs_error = 0;
  double sbs_error = 0;
  /// Selector-only error at b_as for the same selector; the cumulative-gain baseline.
  double baseline_error = 0;
};

struct LedgerSummary {
  long long nominal = 0, spent = 0, granted = 0, leftover = 0, forfeited = 0, credited = 0;
  BatchPlan plan;  // zero for streams
};

struct Trace {
  std::vector<TraceRow> rows;
  LedgerSummary ledger;
};

using TraceSet = std::map<RunName, Trace>;

struct Tables {
  /// VBS selector, batch: SBS, pipeline none, SSB, SSB-CE.
  std::vector<LossReport> table1;
  /// Trained selector, batch: SBS, selector, pipeline none, SSB, SSB-CE.
  std::vector<LossReport> table2;
  /// Per (selector, strategy): one cumulative-gain series per split stream.
  std::map<std::pair<SelectorKind, Strategy>, std::vector<std::vector<double>>> gains;
};

/// Builds whichever tables the traces fully cover.
Tables build_tables(const TraceSet& traces, int splits);

struct EvaluateOptions {
  std::vector<Strategy> strategies;
  std::vector<SelectorKind> selectors;
  std::vector<Setting> settings;
};

EvaluateOptions default_options(const ExperimentConfig& config);

TraceSet cmd_evaluate(const ExperimentConfig& config, std::uint64_t seed, const RunArchive& archive,
                      const LabelSet& labels, const TrainingResult& training, const EvaluateOptions& options,
                      std::ostream& log);

/// Writes tables, stream summaries and plots; throws DataError "nothing to report" without traces.
Tables cmd_report(const ExperimentConfig& config, std::uint64_t seed, std::ostream& log);

void write_trace(const std::filesystem::path& path, const Trace& trace, const std::string& config_hash);
Trace read_trace(const std::filesystem::path& path, const std::string& config_hash);
TraceSet read_traces(const std::filesystem::path& dir, const std::string& config_hash);

std::string loss_table_tsv(const std::vector<LossReport>& rows, int splits, const std::string& config_hash);

// Exit codes of the command line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitOther = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIncomplete = 3;
inline constexpr int kExitTraining = 4;

}  // namespace easyfilter::cli
