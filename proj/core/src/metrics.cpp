#include "easyfilter/metrics.hpp"

#include <algorithm>

#include "easyfilter/errors.hpp"

namespace easyfilter {

BaselineTrace compute_vbs(std::span<const SampleKey> keys, const RunSource& runs, SolverId sbs, int budget) {
  BaselineTrace t;
  t.keys.assign(keys.begin(), keys.end());
  t.vbs.reserve(keys.size());
  t.sbs.reserve(keys.size());
  for (const auto& k : keys) {
    double best = 0;
    for (std::size_t i = 0; i < kPortfolio.size(); ++i) {
      const double e = best_at(runs.record(k, kPortfolio[i]), budget);
      best = i == 0 ? e : std::min(best, e);
    }
    t.vbs.push_back(best);
    t.sbs.push_back(best_at(runs.record(k, sbs), budget));
  }
  return t;
}

void add_selector_baseline(BaselineTrace& trace, const RunSource& runs, const SolverSelector& selector, int budget) {
  trace.selector_only.clear();
  trace.selector_only.reserve(trace.size());
  for (const auto& k : trace.keys) {
    const ConcatenatedTrajectory probe = concat(prefix(runs.record(k, SolverId::kCmaEs), kProbeGenerations),
                                                prefix(runs.record(k, SolverId::kDe), kProbeGenerations),
                                                prefix(runs.record(k, SolverId::kPso), kProbeGenerations));
    trace.selector_only.push_back(best_at(runs.record(k, selector.select(k, probe)), budget));
  }
}

double summed_loss(std::span<const double> method_errors, std::span<const double> vbs_errors) {
  if (method_errors.size() != vbs_errors.size()) throw AuditError("loss over traces of different length");
  double sum = 0;
  for (std::size_t i = 0; i < vbs_errors.size(); ++i) sum += vbs_errors[i] - method_errors[i];
  return sum;
}

double loss_to_vbs(std::span<const PipelineOutcome> trace, const BaselineTrace& baseline) {
  if (trace.size() != baseline.size()) throw AuditError("loss over traces of different length");
  std::vector<double> errors;
  errors.reserve(trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace[i].key != baseline.keys[i]) {
      throw AuditError("trace and baseline diverge at " + to_string(trace[i].key));
    }
    errors.push_back(trace[i].final_error);
  }
  return summed_loss(errors, baseline.vbs);
}

LossReport make_loss_report(std::string method, std::vector<double> per_split) {
  LossReport r;
  r.method = std::move(method);
  r.splits = std::move(per_split);
  for (double v : r.splits) r.overall += v;
  return r;
}

double median_of(std::vector<double> values) {
  if (values.empty()) throw ContractError("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

namespace {

double quantile(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

StreamSummary summarize_values(std::vector<double> values) {
  if (values.empty()) throw ContractError("no streams to summarize");
  std::sort(values.begin(), values.end());
  StreamSummary s;
  s.count = values.size();
  s.min = values.front();
  s.max = values.back();
  s.q1 = quantile(values, 0.25);
  s.median = quantile(values, 0.5);
  s.q3 = quantile(values, 0.75);
  return s;
}

StreamSummary summarize_stream(std::span<const std::vector<double>> gains) {
  std::vector<double> finals;
  for (const auto& g : gains) finals.push_back(g.empty() ? 0.0 : g.back());
  return summarize_values(std::move(finals));
}

}  // namespace easyfilter
