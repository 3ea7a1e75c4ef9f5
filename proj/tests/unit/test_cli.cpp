#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "easyfilter/errors.hpp"
#include "easyfilter/io.hpp"
#include "easyfilter_tools/commands.hpp"
#include "fixtures.hpp"

using namespace easyfilter;
using namespace easyfilter::cli;
using namespace easyfilter::testing;

namespace {

ExperimentConfig tiny_config(const std::filesystem::path& out) {
  auto c = desk_config();
  c.archive.functions = {FunctionId{1}, FunctionId{2}, FunctionId{5}};
  c.archive.instances = 2;
  c.archive.hardness_runs = 10;
  c.training.epochs = 5;
  c.training.hidden = 4;
  c.stream_blocks = 2;
  c.stream_block_size = 10;
  c.output_dir = out;
  c.workers = 2;
  return c;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(EASYFILTER_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) { return read_file(p); }

}  // namespace

TEST(Cli, RunNamesRoundTrip) {
  for (auto sk : {SelectorKind::kVbs, SelectorKind::kTrained})
    for (auto st : {Setting::kBatch, Setting::kStream})
      for (auto s : {Strategy::kNone, Strategy::kSsb, Strategy::kSsbCe}) {
        const RunName n{sk, st, s, 3};
        const auto back = parse_run_name(n.file_stem());
        ASSERT_TRUE(back.has_value()) << n.file_stem();
        EXPECT_EQ(*back, n);
      }
  EXPECT_FALSE(parse_run_name("vbs-batch-ssb-split1.ledger").has_value());
  EXPECT_FALSE(parse_run_name("notes").has_value());
}

TEST(Cli, LossTableShape) {
  std::vector<LossReport> rows;
  for (const char* m : {"SBS", "Trained Selector", "Pipeline No Savings", "Pipeline SSB", "Pipeline SSB-CE"}) {
    rows.push_back(make_loss_report(m, {1, 2, 3, 4, 5}));
  }
  std::istringstream in(loss_table_tsv(rows, 5, "abc"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "#easyfilter\tloss-table\tv1\tconfig=abc");
  std::getline(in, line);
  EXPECT_EQ(line, "method\toverall\tsplit1\tsplit2\tsplit3\tsplit4\tsplit5");
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    EXPECT_EQ(std::count(line.begin(), line.end(), '\t'), 6);
  }
  EXPECT_EQ(n, 5);
}

TEST(Cli, TraceRoundTripAndHashCheck) {
  TempDir dir("trace");
  Trace t;
  TraceRow r;
  r.outcome.key = {FunctionId{2}, 3, 4};
  r.outcome.truth = Hardness::kHard;
  r.outcome.verdict = Hardness::kEasy;
  r.outcome.chosen = SolverId::kCmaEs;
  r.outcome.probe_cost = 70;
  r.outcome.solve_budget = 2700;
  r.outcome.saved = 1790;
  r.outcome.final_error = 0.125;
  r.vbs_error = 1e-9;
  r.sbs_error = 0.3;
  r.baseline_error = 0.1 + 0.2;
  t.rows = {r, r};
  t.ledger.nominal = 9120;
  t.ledger.credited = 3580;
  const auto path = dir.path() / "vbs-batch-ssb-ce-split1.tsv";
  write_trace(path, t, "h");
  const auto back = read_trace(path, "h");
  ASSERT_EQ(back.rows.size(), 2u);
  EXPECT_EQ(back.rows[1].baseline_error, 0.1 + 0.2);
  EXPECT_EQ(back.rows[0].outcome.truth, Hardness::kHard);
  EXPECT_EQ(back.rows[0].outcome.saved, 1790);
  EXPECT_EQ(back.ledger.credited, 3580);
  EXPECT_THROW(read_trace(path, "other"), DataError);
  EXPECT_EQ(read_traces(dir.path(), "h").size(), 1u);
}

TEST(Cli, ReportWithoutTracesHasNothingToReport) {
  TempDir dir("empty");
  const auto c = tiny_config(dir.path());
  try {
    cmd_report(c, 1, std::cerr);
    FAIL() << "expected an error";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("nothing to report"), std::string::npos);
  }
}

TEST(Cli, EndToEndOnATinySuite) {
  TempDir dir("e2e");
  const auto c = tiny_config(dir.path());
  std::ostringstream log;
  const auto g = cmd_generate(c, log);
  EXPECT_EQ(g.produced, static_cast<std::size_t>(3 * 2 * 10 * 3));
  EXPECT_EQ(cmd_generate(c, log).produced, 0u);
  const auto archive = open_archive(c);
  const auto labels = cmd_label(c, archive, log);
  const auto training = cmd_train(c, 1, archive, labels, log);
  ASSERT_EQ(training.splits.size(), 5u);
  for (const auto& m : training.splits) {
    EXPECT_EQ(m.hardness_eval.matrix.total(), static_cast<long long>(m.split.hardness_test.size()));
    EXPECT_EQ(m.selector_eval.matrix.total(), static_cast<long long>(m.split.selector_test.size()));
  }
  const auto reloaded = load_training(c, 1, archive, load_labels(c));
  EXPECT_TRUE(reloaded.splits[2].hardness == training.splits[2].hardness);
  const auto traces = cmd_evaluate(c, 1, archive, labels, training, default_options(c), log);
  EXPECT_EQ(traces.size(), 5u * 2 * 2 * 3);
  for (const auto& [name, t] : traces) {
    EXPECT_EQ(t.ledger.nominal, t.ledger.spent + t.ledger.granted + t.ledger.leftover + t.ledger.forfeited);
  }
  const auto tables = cmd_report(c, 1, log);
  EXPECT_EQ(tables.table1.size(), 4u);
  EXPECT_EQ(tables.table2.size(), 5u);
  EXPECT_EQ(tables.gains.size(), 6u);
  const auto p = paths_of(c);
  for (const char* f : {"table1.tsv", "table2.tsv", "streams.tsv", "ledgers.tsv", "gain-vbs-ssb.svg", "boxplot-trained.svg"}) {
    EXPECT_TRUE(std::filesystem::exists(p.reports(1) / f)) << f;
  }
  const auto svg = slurp(p.reports(1) / "gain-trained-ssb-ce.svg");
  std::size_t lines = 0;
  for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) ++lines;
  EXPECT_EQ(lines, 5u);

  // Same config and seed: byte-identical reports.
  const std::string first = slurp(p.reports(1) / "table2.tsv");
  cmd_evaluate(c, 1, archive, labels, load_training(c, 1, archive, labels), default_options(c), log);
  cmd_report(c, 1, log);
  EXPECT_EQ(slurp(p.reports(1) / "table2.tsv"), first);

  // A trace from another configuration is rejected.
  auto other = c;
  other.training.epochs = 6;
  EXPECT_THROW(cmd_report(other, 1, log), DataError);
}

TEST(Cli, ExitCodes) {
  TempDir dir("exit");
  const auto bad = dir.path() / "bad.json";
  std::ofstream(bad) << R"({"schema_version": 1, "unknown": true})";
  EXPECT_EQ(run_cli("generate --config " + bad.string()), kExitConfig);
  EXPECT_EQ(run_cli("label --output " + (dir.path() / "none").string()), kExitIncomplete);
  EXPECT_EQ(run_cli("report --output " + (dir.path() / "none").string()), kExitOther);
  EXPECT_EQ(run_cli("evaluate --strategy greedy"), kExitConfig);
  EXPECT_EQ(run_cli("frobnicate"), kExitConfig);
  EXPECT_EQ(run_cli("--help"), kExitOk);

  const auto tiny = dir.path() / "tiny.json";
  auto c = tiny_config(dir.path() / "out");
  c.training.learning_rate = 1e308;
  std::ofstream(tiny) << dump_config(c);
  EXPECT_EQ(run_cli("generate --config " + tiny.string()), kExitOk);
  EXPECT_EQ(run_cli("label --config " + tiny.string()), kExitOk);
  EXPECT_EQ(run_cli("evaluate --config " + tiny.string()), kExitIncomplete);
  EXPECT_EQ(run_cli("train --config " + tiny.string()), kExitTraining);
}
