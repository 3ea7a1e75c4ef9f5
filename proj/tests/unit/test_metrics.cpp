#include <gtest/gtest.h>

#include "easyfilter/errors.hpp"
#include "easyfilter/metrics.hpp"
#include "easyfilter/svg.hpp"
#include "fixtures.hpp"

using namespace easyfilter;
using namespace easyfilter::testing;

TEST(Metrics, VbsIsTheElementwiseMinimum) {
  FakeRuns runs;
  const SampleKey k{FunctionId{3}, 1, 1};
  runs.archive.insert({k, SolverId::kCmaEs}, step_record(SolverId::kCmaEs, 2.0, 2.0, 1));
  runs.archive.insert({k, SolverId::kDe}, step_record(SolverId::kDe, 0.5, 0.5, 1));
  runs.archive.insert({k, SolverId::kPso}, step_record(SolverId::kPso, 1.0, 1.0, 1));
  const std::vector<SampleKey> keys{k};
  const auto t = compute_vbs(keys, runs, SolverId::kCmaEs, 4000);
  EXPECT_EQ(t.vbs[0], 0.5);
  EXPECT_EQ(t.sbs[0], 2.0);
  EXPECT_LE(t.vbs[0], t.sbs[0]);
}

TEST(Metrics, MissingRunsAreIncomplete) {
  FakeRuns runs;
  const std::vector<SampleKey> keys{{FunctionId{3}, 1, 1}};
  EXPECT_THROW(compute_vbs(keys, runs, SolverId::kCmaEs, 4000), IncompleteArchiveError);
}

TEST(Metrics, SelectorBaselineUsesTheSelectorsPick) {
  FakeRuns runs;
  const SampleKey k{FunctionId{3}, 1, 1};
  add_sample(runs, k, false, 1.0, 2.0, 3.0);
  const std::vector<SampleKey> keys{k};
  auto t = compute_vbs(keys, runs, SolverId::kCmaEs, 4000);
  const FixedSelector pso(SolverId::kPso);
  add_selector_baseline(t, runs, pso, 4000);
  EXPECT_EQ(t.selector_only[0], best_at(runs.record(k, SolverId::kPso), 4000));
}

TEST(Metrics, LossOfTheVbsItselfIsZero) {
  const std::vector<double> vbs{0.5, 1e-9, 3.0};
  EXPECT_EQ(summed_loss(vbs, vbs), 0.0);
  const std::vector<double> worse{1.0, 1e-9, 4.0};
  EXPECT_DOUBLE_EQ(summed_loss(worse, vbs), -1.5);
  EXPECT_THROW(summed_loss(std::vector<double>{1.0}, vbs), AuditError);
}

TEST(Metrics, LossToVbsChecksAlignment) {
  BaselineTrace b;
  b.keys = {{FunctionId{1}, 1, 1}, {FunctionId{1}, 1, 2}};
  b.vbs = {1.0, 2.0};
  std::vector<PipelineOutcome> trace(2);
  trace[0].key = b.keys[0];
  trace[0].final_error = 0.5;
  trace[1].key = b.keys[1];
  trace[1].final_error = 2.0;
  EXPECT_DOUBLE_EQ(loss_to_vbs(trace, b), 0.5);
  std::swap(trace[0], trace[1]);
  EXPECT_THROW(loss_to_vbs(trace, b), AuditError);
}

TEST(Metrics, ReportOverallIsTheSumOfSplits) {
  const auto r = make_loss_report("SSB", {1.0, -2.0, 0.5, 0.25, 3.0});
  EXPECT_DOUBLE_EQ(r.overall, 2.75);
  EXPECT_EQ(r.splits.size(), 5u);
}

TEST(Metrics, StreamSummaryOrderStatistics) {
  const std::vector<std::vector<double>> gains{{0.5, 1.0}, {2.0}, {1.0, 3.0}};
  const auto s = summarize_stream(gains);
  EXPECT_EQ(s.median, 2.0);
  EXPECT_EQ(s.min, 1.0);
  EXPECT_EQ(s.max, 3.0);
  EXPECT_EQ(s.q1, 1.5);
  EXPECT_EQ(s.count, 3u);
  const std::vector<std::vector<double>> flat{{0.0}, {0.0}, {0.0}, {0.0}, {0.0}};
  const auto z = summarize_stream(flat);
  EXPECT_EQ(z.min, 0.0);
  EXPECT_EQ(z.max, 0.0);
  EXPECT_THROW(summarize_stream(std::vector<std::vector<double>>{}), ContractError);
}

TEST(Metrics, MedianOfEvenCountAverages) {
  EXPECT_EQ(median_of({4.0, 1.0, 3.0, 2.0}), 2.5);
  EXPECT_THROW(median_of({}), ContractError);
}

TEST(Svg, LinePlotHasOnePolylinePerSeries) {
  std::vector<Series> s;
  for (int k = 0; k < 5; ++k) s.push_back({"stream " + std::to_string(k + 1), {0.0, 1.0 * k, 2.0 * k, -1.0}});
  const auto svg = line_plot_svg("gain", "instance", "gain", s);
  std::size_t count = 0;
  for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) ++count;
  EXPECT_EQ(count, 5u);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(svg, line_plot_svg("gain", "instance", "gain", s));
}

TEST(Svg, BoxplotHasOneBoxPerGroup) {
  const std::vector<BoxGroup> g{{"none", summarize_values({0, 0, 0})}, {"ssb", summarize_values({1, 2, 3, 4, 5})},
                                {"ssb-ce", summarize_values({2, 4, 8})}};
  const auto svg = boxplot_svg("end of stream", "gain", g);
  std::size_t count = 0;
  for (auto pos = svg.find("class=\"box\""); pos != std::string::npos; pos = svg.find("class=\"box\"", pos + 1)) ++count;
  EXPECT_EQ(count, 3u);
  EXPECT_NE(svg.find("ssb-ce"), std::string::npos);
}

TEST(Svg, EscapesLabels) {
  const auto svg = line_plot_svg("a<b & c", "x", "y", {{"s\"1", {1.0}}});
  EXPECT_NE(svg.find("a&lt;b &amp; c"), std::string::npos);
  EXPECT_EQ(svg.find("a<b"), std::string::npos);
}
