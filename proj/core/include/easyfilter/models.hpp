#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "easyfilter/archive.hpp"
#include "easyfilter/gru.hpp"
#include "easyfilter/trajectory.hpp"

namespace easyfilter {

enum class ModelKind { kRecurrent, kNearestNeighbor };
std::string_view name_of(ModelKind k) noexcept;
ModelKind parse_model_kind(std::string_view s);

// kShape feeds the per-trajectory standardized series (normalize()); kLevel
// feeds signed-log values under one affine scaling fitted on the training set,
// which keeps the error level visible to the classifier.
enum class InputEncoding { kShape, kLevel };
std::string_view name_of(InputEncoding e) noexcept;
InputEncoding parse_input_encoding(std::string_view s);

/// Model input for a raw trajectory before the fitted scaling.
std::vector<double> encode(std::span<const double> values, InputEncoding encoding);

struct TrainingConfig {
  int epochs = 200;
  double learning_rate = 1e-4;
  int batch_size = 64;
  int hidden = 32;
  std::uint64_t seed = 0;

  void validate() const;
};

struct ClassifierSpec {
  ModelKind kind = ModelKind::kRecurrent;
  int input_length = kProbeGenerations;
  int num_classes = 2;
  InputEncoding encoding = InputEncoding::kLevel;
  TrainingConfig training;

  void validate() const;
};

ClassifierSpec hardness_spec(ModelKind kind, InputEncoding encoding, TrainingConfig training);
ClassifierSpec selector_spec(ModelKind kind, InputEncoding encoding, TrainingConfig training);

/// Encoded inputs and integer class labels.
struct Dataset {
  std::vector<std::vector<double>> inputs;
  std::vector<int> labels;

  std::size_t size() const noexcept { return labels.size(); }
};

Dataset hardness_dataset(const RunArchive& archive, std::span<const SampleKey> keys, const HardnessTruth& truth,
                         SolverId sbs, InputEncoding encoding);
Dataset selector_dataset(const RunArchive& archive, std::span<const SampleKey> keys,
                         const std::vector<BestSolverLabel>& labels, InputEncoding encoding);

ProbingTrajectory hardness_probe(const RunArchive& archive, const SampleKey& key, SolverId sbs);
ConcatenatedTrajectory selector_probe(const RunArchive& archive, const SampleKey& key);

class TrainedModel {
 public:
  TrainedModel(ClassifierSpec spec, int split_id);

  const ClassifierSpec& spec() const noexcept { return spec_; }
  int split_id() const noexcept { return split_id_; }

  /// Affine map applied to encoded inputs; identity unless fitted.
  double input_shift = 0.0;
  double input_scale = 1.0;

  /// Class probabilities for one encoded input; throws ContractError on a length mismatch.
  std::vector<double> probabilities(std::span<const double> input) const;
  int predict(std::span<const double> input) const;
  std::vector<int> predict_all(const std::vector<std::vector<double>>& inputs) const;

  // Exactly one of these is populated, depending on the kind.
  std::optional<Gru> network;
  Dataset exemplars;

  bool operator==(const TrainedModel& other) const;

 private:
  ClassifierSpec spec_;
  int split_id_;
};

// Deterministic in (spec, data). Throws ConfigError on an empty or malformed
// training set and TrainingError when the loss becomes non-finite.
TrainedModel train(const ClassifierSpec& spec, const Dataset& data, int split_id);

Hardness predict_hardness(const TrainedModel& model, const ProbingTrajectory& traj);
SolverId predict_solver(const TrainedModel& model, const ConcatenatedTrajectory& traj);

/// Rows are true classes, columns predictions.
struct ConfusionMatrix {
  int classes = 0;
  std::vector<long long> counts;

  explicit ConfusionMatrix(int n = 2) : classes(n), counts(static_cast<std::size_t>(n * n), 0) {}
  long long& at(int truth, int predicted) { return counts[static_cast<std::size_t>(truth * classes + predicted)]; }
  long long at(int truth, int predicted) const { return counts[static_cast<std::size_t>(truth * classes + predicted)]; }
  long long total() const;
  double accuracy() const;
  /// NaN for a class without test samples.
  double recall(int cls) const;
  /// Mean recall over classes present in the test set.
  double balanced_accuracy() const;
};

ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted, int classes);

struct Evaluation {
  ConfusionMatrix matrix;
  double accuracy = 0;
  double balanced_accuracy = 0;
};

Evaluation evaluate_model(const TrainedModel& model, const Dataset& test);

// Index of the median accuracy; ties resolved to the earliest index. Throws
// ConfigError for an even count.
std::size_t select_median_model(std::span<const double> accuracies);

void save_model(const std::filesystem::path& path, const TrainedModel& model, const std::string& config_hash);
TrainedModel load_model(const std::filesystem::path& path, const std::string& config_hash);

}  // namespace easyfilter
