#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "easyfilter/archive.hpp"
#include "easyfilter/errors.hpp"
#include "fixtures.hpp"

using namespace easyfilter;
using namespace easyfilter::testing;

namespace {

ArchiveSpec tiny_spec() {
  ArchiveSpec s;
  s.functions = {FunctionId{1}, FunctionId{2}};
  s.instances = 2;
  s.hardness_runs = 10;
  s.selector_runs = 3;
  s.horizon = 1200;
  s.label_budget = 1200;
  return s;
}

ArchiveSpec desk_spec() {
  ArchiveSpec s;
  for (int f : {1, 2, 3, 5, 6, 8, 12, 13, 14, 17, 20, 21}) s.functions.push_back(FunctionId{f});
  return s;
}

}  // namespace

TEST(Archive, DeskManifestArithmetic) {
  const auto m = manifest_of(desk_spec());
  EXPECT_EQ(m.hardness_samples, 12 * 5 * 20);
  EXPECT_EQ(m.selector_samples, 12 * 5 * 5);
  EXPECT_EQ(m.run_records, 3 * 12 * 5 * 20);
}

TEST(Archive, FullScaleManifest) {
  ArchiveSpec s;
  s.functions = registered_functions();
  s.hardness_runs = 100;
  EXPECT_EQ(manifest_of(s).hardness_samples, 12000);
  EXPECT_EQ(hardness_samples(s).size(), 12000u);
}

TEST(Archive, SpecValidation) {
  auto s = tiny_spec();
  EXPECT_NO_THROW(s.validate());
  s.hardness_runs = 9;
  EXPECT_THROW(s.validate(), ConfigError);
  s = tiny_spec();
  s.selector_runs = 11;
  EXPECT_THROW(s.validate(), ConfigError);
  s = tiny_spec();
  s.horizon = 1210;
  EXPECT_THROW(s.validate(), ConfigError);
  s = tiny_spec();
  s.functions.clear();
  EXPECT_THROW(s.validate(), ConfigError);
}

TEST(Archive, RunSeedsAreDistinctAndStable) {
  std::set<std::uint64_t> seen;
  for (const auto& k : planned_runs(tiny_spec())) seen.insert(run_seed(k));
  EXPECT_EQ(seen.size(), planned_runs(tiny_spec()).size());
  const RunKey k{{FunctionId{1}, 1, 1}, SolverId::kDe};
  EXPECT_EQ(run_seed(k), run_seed(k));
}

TEST(Archive, SerializationRoundTrip) {
  const RunKey key{{FunctionId{2}, 1, 4}, SolverId::kPso};
  auto rec = decay_record(SolverId::kPso, 12.5, 0.97, 1200);
  rec.function = key.sample.function;
  rec.instance_seed = key.sample.instance;
  const auto text = serialize_run(key, rec, "abc");
  const auto [k2, r2] = parse_run(text, "abc");
  EXPECT_EQ(k2, key);
  EXPECT_EQ(r2, rec);
  EXPECT_THROW(parse_run(text, "other"), Error);
  EXPECT_THROW(parse_run("{}\n", ""), Error);
}

TEST(Archive, StoreDetectsForeignRuns) {
  TempDir dir("store");
  const RunStore a(dir.path(), "aaaa");
  const RunStore b(dir.path(), "bbbb");
  const RunKey key{{FunctionId{1}, 1, 1}, SolverId::kCmaEs};
  EXPECT_FALSE(a.contains(key));
  auto rec = decay_record(SolverId::kCmaEs, 1, 0.9, 1200);
  rec.function = key.sample.function;
  rec.instance_seed = key.sample.instance;
  a.put(key, rec);
  EXPECT_TRUE(a.contains(key));
  EXPECT_THROW(b.contains(key), ArchiveError);
  EXPECT_EQ(a.get(key), rec);
}

TEST(Archive, GenerationIsResumableAndComplete) {
  TempDir dir("gen");
  const auto spec = tiny_spec();
  const RunStore store(dir.path(), spec.run_hash());
  const auto total = planned_runs(spec).size();
  EXPECT_EQ(generate_runs(spec, store, 2), total);
  EXPECT_EQ(generate_runs(spec, store, 2), 0u);
  const auto archive = load_archive(spec, store);
  EXPECT_EQ(archive.size(), total);
  std::filesystem::remove(store.path_of({{FunctionId{2}, 2, 7}, SolverId::kDe}));
  EXPECT_THROW(load_archive(spec, store), IncompleteArchiveError);
  EXPECT_EQ(generate_runs(spec, store, 1), 1u);
}

TEST(Archive, GeneratedRunsMatchDirectRuns) {
  TempDir dir("direct");
  auto spec = tiny_spec();
  spec.functions = {FunctionId{2}};
  const RunStore store(dir.path(), spec.run_hash());
  generate_runs(spec, store, 3);
  const RunKey key{{FunctionId{2}, 2, 5}, SolverId::kDe};
  const auto direct = run(generate_instance(FunctionId{2}, 2, 10), SolverConfig::make(SolverId::kDe, run_seed(key), 1200));
  EXPECT_EQ(store.get(key), direct);
}

TEST(Archive, MissingRunIsIncomplete) {
  RunArchive a;
  EXPECT_THROW(a.at({{FunctionId{1}, 1, 1}, SolverId::kCmaEs}), IncompleteArchiveError);
}

TEST(Archive, HardnessNeedsEveryRunBelowTarget) {
  auto spec = tiny_spec();
  spec.functions = {FunctionId{1}};
  spec.horizon = 6000;
  spec.label_budget = 4000;
  FakeRuns runs;
  for (int i = 1; i <= 2; ++i)
    for (int r = 1; r <= 10; ++r) add_sample(runs, {FunctionId{1}, i, r}, true);
  // One run of instance 2 stops short of the target.
  runs.archive = [&] {
    RunArchive a;
    for (const auto& [k, rec] : runs.archive.runs()) {
      if (k.sample == SampleKey{FunctionId{1}, 2, 10} && k.solver == SolverId::kCmaEs) {
        a.insert(k, step_record(SolverId::kCmaEs, 10.0, 2e-7, 100));
      } else {
        a.insert(k, rec);
      }
    }
    return a;
  }();
  const auto labels = label_hardness(spec, runs.archive, SolverId::kCmaEs);
  ASSERT_EQ(labels.size(), 2u);
  EXPECT_EQ(labels[0].label, Hardness::kEasy);
  EXPECT_EQ(labels[1].label, Hardness::kHard);
}

TEST(Archive, BestSolverByMedianWithPortfolioTies) {
  auto spec = tiny_spec();
  spec.functions = {FunctionId{1}, FunctionId{2}};
  spec.horizon = 6000;
  FakeRuns runs;
  for (int i = 1; i <= 2; ++i)
    for (int r = 1; r <= 10; ++r) {
      add_sample(runs, {FunctionId{1}, i, r}, false, 5.0, 1.0, 3.0);  // DE best
      runs.archive.insert({{FunctionId{2}, i, r}, SolverId::kCmaEs}, step_record(SolverId::kCmaEs, 1, 1, 1));
      runs.archive.insert({{FunctionId{2}, i, r}, SolverId::kDe}, step_record(SolverId::kDe, 1, 1, 1));
      runs.archive.insert({{FunctionId{2}, i, r}, SolverId::kPso}, step_record(SolverId::kPso, 1, 1, 1));
    }
  const auto labels = label_best_solver(spec, runs.archive);
  EXPECT_EQ(labels[0].label, SolverId::kDe);
  EXPECT_EQ(labels[1].label, SolverId::kCmaEs);
  EXPECT_EQ(single_best_solver(labels), SolverId::kCmaEs);
  EXPECT_EQ(single_best_solver({{FunctionId{1}, SolverId::kPso, {}}, {FunctionId{2}, SolverId::kPso, {}},
                                {FunctionId{3}, SolverId::kDe, {}}}),
            SolverId::kPso);
}

TEST(Archive, LabelFilesRoundTripAndCheckHash) {
  TempDir dir("labels");
  const std::vector<HardnessLabel> h{{{FunctionId{1}, 1}, Hardness::kEasy}, {{FunctionId{3}, 2}, Hardness::kHard}};
  write_hardness_labels(dir.path() / "h.tsv", h, "cafe");
  const auto back = read_hardness_labels(dir.path() / "h.tsv", "cafe");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].instance, (InstanceRef{FunctionId{3}, 2}));
  EXPECT_EQ(back[1].label, Hardness::kHard);
  EXPECT_THROW(read_hardness_labels(dir.path() / "h.tsv", "beef"), DataError);
  const std::vector<BestSolverLabel> b{{FunctionId{4}, SolverId::kPso, {1.5, 2.5, 0.5}}};
  write_best_solver_labels(dir.path() / "b.tsv", b, "cafe");
  const auto bb = read_best_solver_labels(dir.path() / "b.tsv", "cafe");
  ASSERT_EQ(bb.size(), 1u);
  EXPECT_EQ(bb[0].label, SolverId::kPso);
  EXPECT_EQ(bb[0].medians[2], 0.5);
}

TEST(Archive, SplitsPartitionTheSamples) {
  const auto spec = desk_spec();
  const auto splits = make_splits(spec, 1, 5);
  ASSERT_EQ(splits.size(), 5u);
  for (const auto& s : splits) {
    EXPECT_EQ(s.hardness_test.size(), 240u);
    EXPECT_EQ(s.selector_test.size(), 60u);
    EXPECT_EQ(s.hardness_train.size() + s.hardness_test.size(), 1200u);
    EXPECT_EQ(s.selector_train.size() + s.selector_test.size(), 300u);
    std::set<SampleKey> train(s.hardness_train.begin(), s.hardness_train.end());
    std::set<SampleKey> strain(s.selector_train.begin(), s.selector_train.end());
    for (const auto& k : s.hardness_test) EXPECT_FALSE(train.contains(k));
    // A selector test sample is unseen by both models.
    std::set<SampleKey> htest(s.hardness_test.begin(), s.hardness_test.end());
    for (const auto& k : s.selector_test) {
      EXPECT_TRUE(htest.contains(k));
      EXPECT_FALSE(strain.contains(k));
    }
  }
  EXPECT_NE(splits[0].hardness_test, splits[1].hardness_test);
}

TEST(Archive, SplitsAreSeedDeterministic) {
  const auto a = make_splits(desk_spec(), 3, 5);
  const auto b = make_splits(desk_spec(), 3, 5);
  const auto c = make_splits(desk_spec(), 4, 5);
  EXPECT_EQ(a[2].hardness_test, b[2].hardness_test);
  EXPECT_NE(a[2].hardness_test, c[2].hardness_test);
}

TEST(Archive, SplitFileRoundTrip) {
  TempDir dir("split");
  const auto s = make_splits(tiny_spec(), 1, 5)[0];
  write_split(dir.path() / "s.tsv", s, "h1");
  const auto back = read_split(dir.path() / "s.tsv", s.id, "h1");
  EXPECT_EQ(back.hardness_test, s.hardness_test);
  EXPECT_EQ(back.selector_train, s.selector_train);
  EXPECT_THROW(read_split(dir.path() / "s.tsv", s.id, "h2"), DataError);
}

TEST(Archive, TooSmallToSplit) {
  auto s = tiny_spec();
  s.functions = {FunctionId{1}};
  s.instances = 1;
  s.selector_runs = 1;
  EXPECT_THROW(make_splits(s, 1, 5), ConfigError);
}
