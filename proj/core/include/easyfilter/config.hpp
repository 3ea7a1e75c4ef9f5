#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "easyfilter/archive.hpp"
#include "easyfilter/models.hpp"
#include "easyfilter/pipeline.hpp"

namespace easyfilter {

enum class SelectorKind { kVbs, kTrained };
std::string_view name_of(SelectorKind k) noexcept;
SelectorKind parse_selector_kind(std::string_view s);

enum class Setting { kBatch, kStream };
std::string_view name_of(Setting s) noexcept;
Setting parse_setting(std::string_view s);

inline constexpr int kConfigSchemaVersion = 1;

struct ExperimentConfig {
  ArchiveSpec archive;
  /// strategy is unused here; see `strategies`.
  BudgetPolicy budgets;
  ModelKind model_kind = ModelKind::kRecurrent;
  InputEncoding encoding = InputEncoding::kLevel;
  TrainingConfig training;
  int splits = 5;
  int stream_blocks = 20;
  int stream_block_size = 120;

  // Not hashed: they select what to run, not what a result means.
  std::uint64_t seed = 1;
  std::vector<std::uint64_t> experiment_seeds = {1, 2, 3, 4, 5};
  std::vector<Strategy> strategies = {Strategy::kNone, Strategy::kSsb, Strategy::kSsbCe};
  std::vector<SelectorKind> selectors = {SelectorKind::kVbs, SelectorKind::kTrained};
  std::vector<Setting> settings = {Setting::kBatch, Setting::kStream};
  int workers = 1;
  std::filesystem::path output_dir = "out";

  /// Throws ConfigError.
  void validate() const;
  /// 16 hex digits over every field that changes results, seed excluded.
  std::string hash() const;
  BudgetPolicy policy(Strategy s) const;
};

/// Desk-scale defaults: 12 functions, 5 instances, d = 10, 20 hardness runs.
ExperimentConfig desk_config();

// JSON with "schema_version"; absent keys keep their defaults and unknown
// keys are rejected. Throws ConfigError.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string dump_config(const ExperimentConfig& config);

}  // namespace easyfilter
