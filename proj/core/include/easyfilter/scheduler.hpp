#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "easyfilter/pipeline.hpp"

namespace easyfilter {

struct BatchPlan {
  int easy = 0;
  int hard = 0;
  /// Total credited in phase 1.
  long long saved = 0;
  /// floor(saved / hard); each hard instance receives this rounded down to
  /// whole generations and capped at the policy's max_grant().
  int extension = 0;
  long long granted = 0;
  /// saved - granted, including the floor remainder.
  long long unspent = 0;
};

struct BatchResult {
  std::vector<PipelineOutcome> outcomes;  // in input order
  BatchPlan plan;
  BudgetLedger ledger;
};

// Phase 1 assesses every instance and solves the easy ones; phase 2 solves
// the hard ones with an equal extension.
BatchResult run_batch(const Pipeline& pipeline, std::span<const SampleKey> instances);

struct StreamResult {
  std::vector<PipelineOutcome> outcomes;
  BudgetLedger ledger;
  /// Pool left after the last instance.
  long long leftover = 0;
};

// Strictly sequential. Each hard instance receives min(pool, max_grant())
// rounded down to whole generations of its chosen solver; the rest stays in
// the pool for later hard instances.
StreamResult run_stream(const Pipeline& pipeline, std::span<const SampleKey> stream);

/// Running sum of baseline error minus pipeline error; AuditError when the traces are not aligned.
std::vector<double> cumulative_gain(std::span<const PipelineOutcome> outcomes,
                                    std::span<const PipelineOutcome> baseline);
std::vector<double> cumulative_gain(std::span<const PipelineOutcome> outcomes, std::span<const double> baseline_errors);

struct StreamSpec {
  std::string name;
  std::vector<SampleKey> items;
};

// `blocks` blocks of `block_size` draws with replacement from `pool`,
// concatenated.
StreamSpec bootstrap_stream(std::string name, std::span<const SampleKey> pool, int blocks, int block_size,
                            std::uint64_t seed);

void write_stream_spec(const std::filesystem::path& path, const StreamSpec& spec, const std::string& config_hash);
StreamSpec read_stream_spec(const std::filesystem::path& path, const std::string& config_hash);

}  // namespace easyfilter
