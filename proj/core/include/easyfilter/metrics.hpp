#pragma once

#include <span>
#include <string>
#include <vector>

#include "easyfilter/pipeline.hpp"

namespace easyfilter {

/// Per-sample reference errors at the fixed solve budget.
struct BaselineTrace {
  std::vector<SampleKey> keys;
  std::vector<double> vbs;
  std::vector<double> sbs;
  /// Error of the selector's pick without filter or re-allocation; empty unless computed.
  std::vector<double> selector_only;

  std::size_t size() const noexcept { return keys.size(); }
};

// Minimum over the portfolio of each matched-seed run at `budget`. Missing
// runs surface as IncompleteArchiveError from the source.
BaselineTrace compute_vbs(std::span<const SampleKey> keys, const RunSource& runs, SolverId sbs, int budget);

/// Fills selector_only by asking `selector` for each sample's full probe.
void add_selector_baseline(BaselineTrace& trace, const RunSource& runs, const SolverSelector& selector, int budget);

/// Sum of (vbs_i - method_i); positive means the method beat the VBS.
double summed_loss(std::span<const double> method_errors, std::span<const double> vbs_errors);

/// As above for a pipeline trace; AuditError when keys are not aligned.
double loss_to_vbs(std::span<const PipelineOutcome> trace, const BaselineTrace& baseline);

struct LossReport {
  std::string method;
  std::vector<double> splits;
  double overall = 0;
};

LossReport make_loss_report(std::string method, std::vector<double> per_split);

/// Order statistics of end-of-stream gains; quartiles by linear interpolation.
struct StreamSummary {
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
  std::size_t count = 0;
};

/// Throws ContractError without any stream.
StreamSummary summarize_stream(std::span<const std::vector<double>> gains);
StreamSummary summarize_values(std::vector<double> values);

/// Median with the two middle values averaged for even counts.
double median_of(std::vector<double> values);

}  // namespace easyfilter
