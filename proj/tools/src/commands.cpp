#include "easyfilter_tools/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "easyfilter/errors.hpp"
#include "easyfilter/io.hpp"
#include "easyfilter/seeding.hpp"
#include "easyfilter/svg.hpp"
#include "easyfilter/text.hpp"

namespace easyfilter::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kStreamSalt = 0x57e4;

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string split_file(int id) { return "split" + std::to_string(id) + ".tsv"; }
std::string model_file(std::string_view role, int id) {
  return std::string(role) + "-split" + std::to_string(id) + ".model";
}

TrainingConfig role_training(const ExperimentConfig& c, std::uint64_t seed, std::uint64_t role) {
  TrainingConfig t = c.training;
  t.seed = derive_seed({seed, role});
  return t;
}

std::string confusion_tsv(const ConfusionMatrix& m, const std::vector<std::string>& names, const std::string& hash) {
  std::string out = table_header("confusion", hash) + "truth";
  for (const auto& n : names) out += "\t" + n;
  out += "\n";
  for (int t = 0; t < m.classes; ++t) {
    out += names[static_cast<std::size_t>(t)];
    for (int p = 0; p < m.classes; ++p) out += "\t" + std::to_string(m.at(t, p));
    out += "\n";
  }
  return out;
}

std::vector<std::string> solver_names() {
  std::vector<std::string> out;
  for (auto s : kPortfolio) out.emplace_back(name_of(s));
  return out;
}

}  // namespace

GenerateResult cmd_generate(const ExperimentConfig& config, std::ostream& log) {
  config.validate();
  const Paths p = paths_of(config);
  const RunStore store(p.root, config.archive.run_hash());
  GenerateResult r;
  r.manifest = manifest_of(config.archive);
  log << "generate: " << r.manifest.run_records << " planned runs (" << r.manifest.hardness_samples
      << " hardness samples, " << r.manifest.selector_samples << " selector samples), " << config.workers
      << " workers\n";
  std::size_t last_decile = 0;
  r.produced = generate_runs(config.archive, store, config.workers, [&](std::size_t done, std::size_t total) {
    const std::size_t decile = total ? done * 10 / total : 10;
    if (decile != last_decile) {
      last_decile = decile;
      log << "generate: " << done << "/" << total << "\n" << std::flush;
    }
  });
  write_file(p.root / "config.json", dump_config(config));
  log << "generate: " << r.produced << " new runs\n";
  return r;
}

RunArchive open_archive(const ExperimentConfig& config) {
  return load_archive(config.archive, RunStore(paths_of(config).root, config.archive.run_hash()));
}

LabelSet cmd_label(const ExperimentConfig& config, const RunArchive& archive, std::ostream& log) {
  LabelSet l;
  l.best_solver = label_best_solver(config.archive, archive);
  l.sbs = single_best_solver(l.best_solver);
  l.hardness = label_hardness(config.archive, archive, l.sbs);
  l.truth = to_map(l.hardness);
  const Paths p = paths_of(config);
  write_best_solver_labels(p.labels() / "best_solver.tsv", l.best_solver, config.hash());
  write_hardness_labels(p.labels() / "hardness.tsv", l.hardness, config.hash());
  const auto easy = std::count_if(l.hardness.begin(), l.hardness.end(),
                                  [](const HardnessLabel& h) { return h.label == Hardness::kEasy; });
  log << "label: sbs " << name_of(l.sbs) << ", " << easy << " of " << l.hardness.size() << " instances easy\n";
  return l;
}

LabelSet load_labels(const ExperimentConfig& config) {
  const Paths p = paths_of(config);
  LabelSet l;
  try {
    l.best_solver = read_best_solver_labels(p.labels() / "best_solver.tsv", config.hash());
    l.hardness = read_hardness_labels(p.labels() / "hardness.tsv", config.hash());
  } catch (const ArchiveError& e) {
    throw IncompleteArchiveError(std::string("labels missing (run `label` first): ") + e.what());
  }
  l.sbs = single_best_solver(l.best_solver);
  l.truth = to_map(l.hardness);
  return l;
}

namespace {

SplitModels evaluate_split(const ExperimentConfig& config, const RunArchive& archive, const LabelSet& labels,
                           Split split, TrainedModel hardness, TrainedModel selector) {
  const Dataset htest = hardness_dataset(archive, split.hardness_test, labels.truth, labels.sbs, config.encoding);
  const Dataset stest = selector_dataset(archive, split.selector_test, labels.best_solver, config.encoding);
  Evaluation he = evaluate_model(hardness, htest);
  Evaluation se = evaluate_model(selector, stest);
  return SplitModels{std::move(split), std::move(hardness), std::move(selector), std::move(he), std::move(se)};
}

void pick_medians(TrainingResult& r) {
  std::vector<double> h, s;
  for (const auto& m : r.splits) {
    h.push_back(m.hardness_eval.accuracy);
    s.push_back(m.selector_eval.accuracy);
  }
  r.median_hardness = select_median_model(h);
  r.median_selector = select_median_model(s);
}

}  // namespace

TrainingResult cmd_train(const ExperimentConfig& config, std::uint64_t seed, const RunArchive& archive,
                         const LabelSet& labels, std::ostream& log) {
  const Paths p = paths_of(config);
  const std::string hash = config.hash();
  const auto splits = make_splits(config.archive, seed, config.splits);
  const ClassifierSpec hspec = hardness_spec(config.model_kind, config.encoding, role_training(config, seed, 1));
  const ClassifierSpec sspec = selector_spec(config.model_kind, config.encoding, role_training(config, seed, 2));
  TrainingResult r;
  std::string summary = table_header("model-evaluation", hash) +
                        "model\tsplit\ttest_size\taccuracy\tbalanced_accuracy\trecall_easy\trecall_hard\n";
  for (const auto& split : splits) {
    write_split(p.splits(seed) / split_file(split.id), split, hash);
    const Dataset htrain =
        hardness_dataset(archive, split.hardness_train, labels.truth, labels.sbs, config.encoding);
    const Dataset strain = selector_dataset(archive, split.selector_train, labels.best_solver, config.encoding);
    TrainedModel hm = train(hspec, htrain, split.id);
    TrainedModel sm = train(sspec, strain, split.id);
    save_model(p.models(seed) / model_file("hardness", split.id), hm, hash);
    save_model(p.models(seed) / model_file("selector", split.id), sm, hash);
    SplitModels m = evaluate_split(config, archive, labels, split, std::move(hm), std::move(sm));
    write_file(p.models(seed) / ("confusion-hardness-split" + std::to_string(split.id) + ".tsv"),
               confusion_tsv(m.hardness_eval.matrix, {"easy", "hard"}, hash));
    write_file(p.models(seed) / ("confusion-selector-split" + std::to_string(split.id) + ".tsv"),
               confusion_tsv(m.selector_eval.matrix, solver_names(), hash));
    const auto& hm_ = m.hardness_eval;
    summary += "hardness\t" + std::to_string(split.id) + "\t" + std::to_string(hm_.matrix.total()) + "\t" +
               fixed(hm_.accuracy) + "\t" + fixed(hm_.balanced_accuracy) + "\t" + fixed(hm_.matrix.recall(0)) + "\t" +
               fixed(hm_.matrix.recall(1)) + "\n";
    const auto& se = m.selector_eval;
    summary += "selector\t" + std::to_string(split.id) + "\t" + std::to_string(se.matrix.total()) + "\t" +
               fixed(se.accuracy) + "\t" + fixed(se.balanced_accuracy) + "\t-\t-\n";
    log << "train: split " << split.id << " hardness acc " << fixed(hm_.accuracy) << " bal "
        << fixed(hm_.balanced_accuracy) << " | selector acc " << fixed(se.accuracy) << "\n"
        << std::flush;
    r.splits.push_back(std::move(m));
  }
  pick_medians(r);
  write_file(p.models(seed) / "evaluation.tsv", summary);
  write_file(p.models(seed) / "median.tsv",
             table_header("median-model", hash) + "model\tsplit\nhardness\t" +
                 std::to_string(r.splits[r.median_hardness].split.id) + "\nselector\t" +
                 std::to_string(r.splits[r.median_selector].split.id) + "\n");
  write_file(p.seed_dir(seed) / "config.json", dump_config(config));
  return r;
}

TrainingResult load_training(const ExperimentConfig& config, std::uint64_t seed, const RunArchive& archive,
                             const LabelSet& labels) {
  const Paths p = paths_of(config);
  const std::string hash = config.hash();
  TrainingResult r;
  try {
    for (int id = 1; id <= config.splits; ++id) {
      Split split = read_split(p.splits(seed) / split_file(id), id, hash);
      TrainedModel hm = load_model(p.models(seed) / model_file("hardness", id), hash);
      TrainedModel sm = load_model(p.models(seed) / model_file("selector", id), hash);
      r.splits.push_back(evaluate_split(config, archive, labels, std::move(split), std::move(hm), std::move(sm)));
    }
  } catch (const ArchiveError& e) {
    throw IncompleteArchiveError(std::string("models missing (run `train` first): ") + e.what());
  }
  pick_medians(r);
  return r;
}

std::string RunName::file_stem() const {
  return std::string(name_of(selector)) + "-" + std::string(name_of(setting)) + "-" + std::string(name_of(strategy)) +
         "-split" + std::to_string(split);
}

std::optional<RunName> parse_run_name(const std::string& stem) {
  const auto first = stem.find('-');
  if (first == std::string::npos) return std::nullopt;
  const auto second = stem.find('-', first + 1);
  const auto tail = stem.rfind("-split");
  if (second == std::string::npos || tail == std::string::npos || tail <= second) return std::nullopt;
  try {
    RunName n;
    n.selector = parse_selector_kind(stem.substr(0, first));
    n.setting = parse_setting(stem.substr(first + 1, second - first - 1));
    n.strategy = parse_strategy(stem.substr(second + 1, tail - second - 1));
    n.split = static_cast<int>(parse_int(stem.substr(tail + 6)));
    if (n.file_stem() != stem) return std::nullopt;
    return n;
  } catch (const Error&) {
    return std::nullopt;
  }
}

void write_trace(const fs::path& path, const Trace& trace, const std::string& config_hash) {
  std::string out = table_header("outcomes", config_hash) +
                    "position\tfunction\tinstance\trun\ttruth\tverdict\tchosen\tfallback\tprobe_cost\tsolve_budget\t"
                    "extension\tsaved\tfinal_error\tvbs_error\tsbs_error\tbaseline_error\n";
  for (std::size_t i = 0; i < trace.rows.size(); ++i) {
    const auto& r = trace.rows[i];
    const auto& o = r.outcome;
    out += std::to_string(i + 1) + "\t" + std::to_string(o.key.function.value) + "\t" + std::to_string(o.key.instance) +
           "\t" + std::to_string(o.key.run) + "\t" + (o.truth ? std::string(name_of(*o.truth)) : "-") + "\t" +
           std::string(name_of(o.verdict)) + "\t" + std::string(name_of(o.chosen)) + "\t" +
           (o.selector_fallback ? "1" : "0") + "\t" + std::to_string(o.probe_cost) + "\t" +
           std::to_string(o.solve_budget) + "\t" + std::to_string(o.extension) + "\t" + std::to_string(o.saved) +
           "\t" + format_double(o.final_error) + "\t" + format_double(r.vbs_error) + "\t" +
           format_double(r.sbs_error) + "\t" + format_double(r.baseline_error) + "\n";
  }
  write_file(path, out);
  const auto& l = trace.ledger;
  write_file(fs::path(path).replace_extension(".ledger.tsv"),
             table_header("ledger", config_hash) +
                 "nominal\tspent\tgranted\tleftover\tforfeited\tcredited\teasy\thard\tsaved\textension\tbatch_granted\t"
                 "unspent\n" +
                 std::to_string(l.nominal) + "\t" + std::to_string(l.spent) + "\t" + std::to_string(l.granted) + "\t" +
                 std::to_string(l.leftover) + "\t" + std::to_string(l.forfeited) + "\t" + std::to_string(l.credited) +
                 "\t" + std::to_string(l.plan.easy) + "\t" + std::to_string(l.plan.hard) + "\t" +
                 std::to_string(l.plan.saved) + "\t" + std::to_string(l.plan.extension) + "\t" +
                 std::to_string(l.plan.granted) + "\t" + std::to_string(l.plan.unspent) + "\n");
}

Trace read_trace(const fs::path& path, const std::string& config_hash) {
  Trace t;
  for (const auto& f : read_table(path, "outcomes", config_hash)) {
    if (f.size() != 16) throw DataError(path.string() + ": outcome rows have 16 fields");
    if (parse_int(f[0]) != static_cast<long long>(t.rows.size()) + 1) {
      throw DataError(path.string() + ": positions must be consecutive");
    }
    TraceRow r;
    auto& o = r.outcome;
    o.key = {FunctionId{static_cast<int>(parse_int(f[1]))}, static_cast<int>(parse_int(f[2])),
             static_cast<int>(parse_int(f[3]))};
    if (f[4] != "-") o.truth = parse_hardness(f[4]);
    o.verdict = parse_hardness(f[5]);
    o.chosen = parse_solver(f[6]);
    o.selector_fallback = f[7] == "1";
    o.probe_cost = static_cast<int>(parse_int(f[8]));
    o.solve_budget = static_cast<int>(parse_int(f[9]));
    o.extension = static_cast<int>(parse_int(f[10]));
    o.saved = static_cast<int>(parse_int(f[11]));
    o.final_error = parse_double(f[12]);
    r.vbs_error = parse_double(f[13]);
    r.sbs_error = parse_double(f[14]);
    r.baseline_error = parse_double(f[15]);
    t.rows.push_back(r);
  }
  const auto rows = read_table(fs::path(path).replace_extension(".ledger.tsv"), "ledger", config_hash);
  if (rows.size() != 1 || rows[0].size() != 12) throw DataError(path.string() + ": malformed ledger");
  const auto& f = rows[0];
  auto& l = t.ledger;
  l.nominal = parse_int(f[0]);
  l.spent = parse_int(f[1]);
  l.granted = parse_int(f[2]);
  l.leftover = parse_int(f[3]);
  l.forfeited = parse_int(f[4]);
  l.credited = parse_int(f[5]);
  l.plan.easy = static_cast<int>(parse_int(f[6]));
  l.plan.hard = static_cast<int>(parse_int(f[7]));
  l.plan.saved = parse_int(f[8]);
  l.plan.extension = static_cast<int>(parse_int(f[9]));
  l.plan.granted = parse_int(f[10]);
  l.plan.unspent = parse_int(f[11]);
  return t;
}

TraceSet read_traces(const fs::path& dir, const std::string& config_hash) {
  TraceSet out;
  if (!fs::is_directory(dir)) return out;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".tsv") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    if (auto name = parse_run_name(f.stem().string())) out.emplace(*name, read_trace(f, config_hash));
  }
  return out;
}

EvaluateOptions default_options(const ExperimentConfig& config) {
  return EvaluateOptions{config.strategies, config.selectors, config.settings};
}

namespace {

LedgerSummary summarize(const BudgetLedger& l, long long leftover, const BatchPlan& plan) {
  return LedgerSummary{l.nominal(), l.spent(), l.granted(), leftover, l.forfeited(), l.credited(), plan};
}

Trace to_trace(const std::vector<PipelineOutcome>& outcomes, const BaselineTrace& base) {
  Trace t;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].key != base.keys[i]) throw AuditError("outcomes and baseline out of order");
    t.rows.push_back(TraceRow{outcomes[i], base.vbs[i], base.sbs[i], base.selector_only[i]});
  }
  return t;
}

}  // namespace

TraceSet cmd_evaluate(const ExperimentConfig& config, std::uint64_t seed, const RunArchive& archive,
                      const LabelSet& labels, const TrainingResult& training, const EvaluateOptions& options,
                      std::ostream& log) {
  const Paths p = paths_of(config);
  const std::string hash = config.hash();
  const ArchiveSource source(archive);
  const int b_as = config.budgets.b_as;
  TraceSet out;
  for (const auto& m : training.splits) {
    const TrainedHardness hardness(m.hardness);
    const VbsOracle vbs(source, b_as);
    const TrainedSelector trained(m.selector);
    for (auto sk : options.selectors) {
      const SolverSelector& selector = sk == SelectorKind::kVbs ? static_cast<const SolverSelector&>(vbs) : trained;
      const auto& pool = sk == SelectorKind::kVbs ? m.split.hardness_test : m.split.selector_test;
      for (auto setting : options.settings) {
        std::vector<SampleKey> items = pool;
        if (setting == Setting::kStream && sk == SelectorKind::kTrained) {
          items = bootstrap_stream("", pool, config.stream_blocks, config.stream_block_size,
                                   derive_seed({seed, kStreamSalt, static_cast<std::uint64_t>(m.split.id)}))
                      .items;
        }
        BaselineTrace base = compute_vbs(items, source, labels.sbs, b_as);
        add_selector_baseline(base, source, selector, b_as);
        for (auto strategy : options.strategies) {
          const Pipeline pipeline(source, hardness, selector, config.policy(strategy), labels.sbs, &labels.truth);
          Trace t;
          if (setting == Setting::kBatch) {
            const BatchResult r = run_batch(pipeline, items);
            t = to_trace(r.outcomes, base);
            t.ledger = summarize(r.ledger, r.ledger.pool(), r.plan);
          } else {
            const StreamResult r = run_stream(pipeline, items);
            t = to_trace(r.outcomes, base);
            t.ledger = summarize(r.ledger, r.leftover, BatchPlan{});
          }
          const RunName name{sk, setting, strategy, m.split.id};
          write_trace(p.outcomes(seed) / (name.file_stem() + ".tsv"), t, hash);
          out.emplace(name, std::move(t));
        }
      }
    }
    log << "evaluate: split " << m.split.id << " done\n" << std::flush;
  }
  return out;
}

namespace {

std::vector<double> column(const Trace& t, double TraceRow::*field) {
  std::vector<double> v;
  for (const auto& r : t.rows) v.push_back(r.*field);
  return v;
}

std::vector<double> finals(const Trace& t) {
  std::vector<double> v;
  for (const auto& r : t.rows) v.push_back(r.outcome.final_error);
  return v;
}

bool complete(const TraceSet& traces, SelectorKind sk, Setting setting, Strategy s, int splits) {
  for (int k = 1; k <= splits; ++k) {
    if (!traces.contains(RunName{sk, setting, s, k})) return false;
  }
  return true;
}

std::string_view row_name(Strategy s) {
  switch (s) {
    case Strategy::kNone: return "Pipeline No Savings";
    case Strategy::kSsb: return "Pipeline SSB";
    case Strategy::kSsbCe: return "Pipeline SSB-CE";
  }
  return "?";
}

std::vector<LossReport> loss_table(const TraceSet& traces, SelectorKind sk, int splits) {
  std::vector<Strategy> present;
  for (auto s : {Strategy::kNone, Strategy::kSsb, Strategy::kSsbCe}) {
    if (complete(traces, sk, Setting::kBatch, s, splits)) present.push_back(s);
  }
  if (present.empty()) return {};
  std::vector<double> sbs, sel;
  for (int k = 1; k <= splits; ++k) {
    const Trace& t = traces.at(RunName{sk, Setting::kBatch, present.front(), k});
    const auto vbs = column(t, &TraceRow::vbs_error);
    sbs.push_back(summed_loss(column(t, &TraceRow::sbs_error), vbs));
    sel.push_back(summed_loss(column(t, &TraceRow::baseline_error), vbs));
  }
  std::vector<LossReport> rows;
  rows.push_back(make_loss_report("SBS", sbs));
  if (sk == SelectorKind::kTrained) rows.push_back(make_loss_report("Trained Selector", sel));
  for (auto s : present) {
    std::vector<double> per;
    for (int k = 1; k <= splits; ++k) {
      const Trace& t = traces.at(RunName{sk, Setting::kBatch, s, k});
      per.push_back(summed_loss(finals(t), column(t, &TraceRow::vbs_error)));
    }
    rows.push_back(make_loss_report(std::string(row_name(s)), per));
  }
  return rows;
}

}  // namespace

Tables build_tables(const TraceSet& traces, int splits) {
  Tables t;
  t.table1 = loss_table(traces, SelectorKind::kVbs, splits);
  t.table2 = loss_table(traces, SelectorKind::kTrained, splits);
  for (auto sk : {SelectorKind::kVbs, SelectorKind::kTrained}) {
    for (auto s : {Strategy::kNone, Strategy::kSsb, Strategy::kSsbCe}) {
      if (!complete(traces, sk, Setting::kStream, s, splits)) continue;
      auto& series = t.gains[{sk, s}];
      for (int k = 1; k <= splits; ++k) {
        const Trace& tr = traces.at(RunName{sk, Setting::kStream, s, k});
        std::vector<PipelineOutcome> outcomes;
        for (const auto& r : tr.rows) outcomes.push_back(r.outcome);
        series.push_back(cumulative_gain(outcomes, column(tr, &TraceRow::baseline_error)));
      }
    }
  }
  return t;
}

std::string loss_table_tsv(const std::vector<LossReport>& rows, int splits, const std::string& config_hash) {
  std::string out = table_header("loss-table", config_hash) + "method\toverall";
  for (int k = 1; k <= splits; ++k) out += "\tsplit" + std::to_string(k);
  out += "\n";
  for (const auto& r : rows) {
    out += r.method + "\t" + fixed(r.overall);
    for (double v : r.splits) out += "\t" + fixed(v);
    out += "\n";
  }
  return out;
}

Tables cmd_report(const ExperimentConfig& config, std::uint64_t seed, std::ostream& log) {
  const Paths p = paths_of(config);
  const std::string hash = config.hash();
  const TraceSet traces = read_traces(p.outcomes(seed), hash);
  if (traces.empty()) throw DataError("nothing to report: no outcome traces in " + p.outcomes(seed).string());
  const Tables t = build_tables(traces, config.splits);
  if (t.table1.empty() && t.table2.empty() && t.gains.empty()) {
    throw DataError("nothing to report: outcome traces do not cover all splits of any run");
  }
  const fs::path dir = p.reports(seed);
  if (!t.table1.empty()) write_file(dir / "table1.tsv", loss_table_tsv(t.table1, config.splits, hash));
  if (!t.table2.empty()) write_file(dir / "table2.tsv", loss_table_tsv(t.table2, config.splits, hash));

  std::string ledgers = table_header("ledgers", hash) +
                        "run\tnominal\tspent\tgranted\tleftover\tforfeited\tcredited\teasy\thard\textension\tunspent\n";
  for (const auto& [name, tr] : traces) {
    const auto& l = tr.ledger;
    ledgers += name.file_stem() + "\t" + std::to_string(l.nominal) + "\t" + std::to_string(l.spent) + "\t" +
               std::to_string(l.granted) + "\t" + std::to_string(l.leftover) + "\t" + std::to_string(l.forfeited) +
               "\t" + std::to_string(l.credited) + "\t" + std::to_string(l.plan.easy) + "\t" +
               std::to_string(l.plan.hard) + "\t" + std::to_string(l.plan.extension) + "\t" +
               std::to_string(l.plan.unspent) + "\n";
  }
  write_file(dir / "ledgers.tsv", ledgers);

  if (!t.gains.empty()) {
    std::string summary = table_header("stream-summary", hash) + "selector\tstrategy\tstreams\tmin\tq1\tmedian\tq3\tmax\n";
    std::map<SelectorKind, std::vector<BoxGroup>> boxes;
    for (const auto& [key, series] : t.gains) {
      const auto [sk, strategy] = key;
      const std::string tag = std::string(name_of(sk)) + "-" + std::string(name_of(strategy));
      const StreamSummary s = summarize_stream(series);
      summary += std::string(name_of(sk)) + "\t" + std::string(name_of(strategy)) + "\t" + std::to_string(s.count) +
                 "\t" + fixed(s.min) + "\t" + fixed(s.q1) + "\t" + fixed(s.median) + "\t" + fixed(s.q3) + "\t" +
                 fixed(s.max) + "\n";
      boxes[sk].push_back({std::string(name_of(strategy)), s});

      std::string gains = table_header("gains", hash) + "position";
      std::size_t longest = 0;
      for (std::size_t k = 0; k < series.size(); ++k) {
        gains += "\tstream" + std::to_string(k + 1);
        longest = std::max(longest, series[k].size());
      }
      gains += "\n";
      for (std::size_t i = 0; i < longest; ++i) {
        gains += std::to_string(i + 1);
        for (const auto& s : series) gains += "\t" + (i < s.size() ? fixed(s[i]) : std::string("-"));
        gains += "\n";
      }
      write_file(dir / ("gains-" + tag + ".tsv"), gains);

      std::vector<Series> lines;
      for (std::size_t k = 0; k < series.size(); ++k) lines.push_back({"stream " + std::to_string(k + 1), series[k]});
      write_file(dir / ("gain-" + tag + ".svg"),
                 line_plot_svg("Cumulative gain, " + std::string(name_of(sk)) + " selector, " +
                                   std::string(name_of(strategy)),
                               "instance", "cumulative gain", lines));
    }
    write_file(dir / "streams.tsv", summary);
    for (const auto& [sk, groups] : boxes) {
      write_file(dir / ("boxplot-" + std::string(name_of(sk)) + ".svg"),
                 boxplot_svg("End-of-stream gain, " + std::string(name_of(sk)) + " selector", "gain", groups));
    }
  }
  log << "report: " << traces.size() << " traces -> " << dir.string() << "\n";
  return t;
}

}  // namespace easyfilter::cli
