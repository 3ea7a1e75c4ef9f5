#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "easyfilter/solvers.hpp"

namespace easyfilter {

/// What the archive contains; everything else about an experiment lives in
/// ExperimentConfig.
struct ArchiveSpec {
  std::vector<FunctionId> functions;
  int instances = 5;  // instance seeds 1..instances
  int dimension = 10;
  int hardness_runs = 20;
  int selector_runs = 5;
  int horizon = 6000;
  int label_budget = 4000;
  double precision_target = 1e-7;

  /// Throws ConfigError.
  void validate() const;
  /// Hash of the fields that determine run contents (dimension, horizon).
  std::string run_hash() const;
};

/// One optimization sample: an instance plus a run index shared by all solvers.
struct SampleKey {
  FunctionId function{};
  int instance = 0;
  int run = 0;

  auto operator<=>(const SampleKey&) const = default;
};

struct InstanceRef {
  FunctionId function{};
  int instance = 0;

  auto operator<=>(const InstanceRef&) const = default;
};

inline InstanceRef instance_of(const SampleKey& k) { return {k.function, k.instance}; }

struct RunKey {
  SampleKey sample;
  SolverId solver = SolverId::kCmaEs;

  auto operator<=>(const RunKey&) const = default;
};

std::uint64_t run_seed(const RunKey& key);
std::string to_string(const SampleKey& key);

/// Runs of every solver for samples with run index <= hardness_runs; the
/// first selector_runs of them double as selector data.
std::vector<RunKey> planned_runs(const ArchiveSpec& spec);
std::vector<SampleKey> hardness_samples(const ArchiveSpec& spec);
std::vector<SampleKey> selector_samples(const ArchiveSpec& spec);

struct DatasetManifest {
  long long hardness_samples = 0;
  long long selector_samples = 0;
  long long run_records = 0;
};

DatasetManifest manifest_of(const ArchiveSpec& spec);

/// In-memory run collection.
class RunArchive {
 public:
  void insert(const RunKey& key, RunRecord record);
  bool contains(const RunKey& key) const { return runs_.contains(key); }
  /// Throws IncompleteArchiveError when absent.
  const RunRecord& at(const RunKey& key) const;
  const RunRecord& at(const SampleKey& key, SolverId solver) const { return at(RunKey{key, solver}); }
  std::size_t size() const noexcept { return runs_.size(); }
  const std::map<RunKey, RunRecord>& runs() const noexcept { return runs_; }

 private:
  std::map<RunKey, RunRecord> runs_;
};

// On-disk layout: runs/<solver>/<function>-<instance>-<run>.jsonl, each a
// header line followed by one record line.
class RunStore {
 public:
  RunStore(std::filesystem::path root, std::string run_hash);

  std::filesystem::path path_of(const RunKey& key) const;
  /// True when a record with a matching hash exists; throws ArchiveError on a
  /// record written under a different configuration.
  bool contains(const RunKey& key) const;
  void put(const RunKey& key, const RunRecord& record) const;
  RunRecord get(const RunKey& key) const;

  const std::filesystem::path& root() const noexcept { return root_; }

 private:
  std::filesystem::path root_;
  std::string hash_;
};

std::string serialize_run(const RunKey& key, const RunRecord& record, const std::string& run_hash);
/// Inverse of serialize_run; checks the hash when `expected_hash` is non-empty.
std::pair<RunKey, RunRecord> parse_run(const std::string& text, const std::string& expected_hash);

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

// Generates every missing planned run; existing runs are left untouched.
// Returns the number of runs produced.
std::size_t generate_runs(const ArchiveSpec& spec, const RunStore& store, int workers, const ProgressFn& progress = {});

/// Loads all planned runs; throws IncompleteArchiveError naming the first gap.
RunArchive load_archive(const ArchiveSpec& spec, const RunStore& store);

enum class Hardness { kEasy = 0, kHard = 1 };
std::string_view name_of(Hardness h) noexcept;
Hardness parse_hardness(std::string_view s);

struct HardnessLabel {
  InstanceRef instance;
  Hardness label = Hardness::kHard;
};

struct BestSolverLabel {
  FunctionId function{};
  SolverId label = SolverId::kCmaEs;
  std::array<double, 3> medians{};
};

/// Median over the selector runs of every instance of the function, per solver;
/// lowest median wins, ties in portfolio order.
std::vector<BestSolverLabel> label_best_solver(const ArchiveSpec& spec, const RunArchive& archive);

/// The solver that wins the most functions; ties in portfolio order.
SolverId single_best_solver(const std::vector<BestSolverLabel>& labels);

/// Easy iff every hardness run of `sbs` is below the target at the label budget.
std::vector<HardnessLabel> label_hardness(const ArchiveSpec& spec, const RunArchive& archive, SolverId sbs);

using HardnessTruth = std::map<InstanceRef, Hardness>;
HardnessTruth to_map(const std::vector<HardnessLabel>& labels);

void write_hardness_labels(const std::filesystem::path& path, const std::vector<HardnessLabel>& labels,
                           const std::string& config_hash);
std::vector<HardnessLabel> read_hardness_labels(const std::filesystem::path& path, const std::string& config_hash);
void write_best_solver_labels(const std::filesystem::path& path, const std::vector<BestSolverLabel>& labels,
                              const std::string& config_hash);
std::vector<BestSolverLabel> read_best_solver_labels(const std::filesystem::path& path,
                                                     const std::string& config_hash);

// Selector test samples are a random fifth of the selector samples; the
// hardness test set contains them and is topped up to a fifth of the hardness
// samples, so a pipeline evaluated on the selector test set never sees a
// sample either model trained on. Row order of the test sets is random.
struct Split {
  int id = 0;
  std::uint64_t seed = 0;
  std::vector<SampleKey> hardness_train, hardness_test;
  std::vector<SampleKey> selector_train, selector_test;
};

/// Throws ConfigError when a set would be empty.
std::vector<Split> make_splits(const ArchiveSpec& spec, std::uint64_t seed, int k = 5);

void write_split(const std::filesystem::path& path, const Split& split, const std::string& config_hash);
Split read_split(const std::filesystem::path& path, int id, const std::string& config_hash);

}  // namespace easyfilter
