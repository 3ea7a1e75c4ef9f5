#include <gtest/gtest.h>

#include <random>
#include <set>

#include "easyfilter/errors.hpp"
#include "easyfilter/scheduler.hpp"
#include "fixtures.hpp"

using namespace easyfilter;
using namespace easyfilter::testing;

namespace {

// Samples 1..n of function 1 are easy, of function 2 hard; hard samples pick
// CMA-ES, DE or PSO depending on the run index.
struct World {
  FakeRuns runs;
  HardnessTruth truth;
  World() {
    for (int r = 1; r <= 12; ++r) {
      add_sample(runs, {FunctionId{1}, 1, r}, true);
      const double levels[3][3] = {{0.5, 2.0, 3.0}, {2.0, 0.5, 3.0}, {2.0, 3.0, 0.5}};
      const auto& l = levels[r % 3];
      add_sample(runs, {FunctionId{2}, 1, r}, false, l[0], l[1], l[2]);
    }
    truth = {{{FunctionId{1}, 1}, Hardness::kEasy}, {{FunctionId{2}, 1}, Hardness::kHard}};
  }
  static SampleKey easy(int r) { return {FunctionId{1}, 1, r}; }
  static SampleKey hard(int r) { return {FunctionId{2}, 1, r}; }
};

struct Rig {
  World w;
  PerfectHardness hardness{w.truth};
  VbsOracle vbs{w.runs, 4000};
  Pipeline make(Strategy s) const { return Pipeline(w.runs, hardness, vbs, policy(s), SolverId::kCmaEs, &w.truth); }
};

std::vector<SampleKey> random_stream(std::mt19937_64& rng, int length) {
  std::vector<SampleKey> out;
  std::uniform_int_distribution<int> run(1, 12), coin(0, 2);
  for (int i = 0; i < length; ++i) out.push_back(coin(rng) == 0 ? World::easy(run(rng)) : World::hard(run(rng)));
  return out;
}

}  // namespace

TEST(Scheduler, StreamEasyThenHardGrants490) {
  Rig s;
  const std::vector<SampleKey> stream{World::easy(1), World::hard(3)};  // run 3 picks CMA-ES
  const auto r = run_stream(s.make(Strategy::kSsb), stream);
  EXPECT_EQ(r.outcomes[1].chosen, SolverId::kCmaEs);
  EXPECT_EQ(r.outcomes[1].extension, 490);
  EXPECT_EQ(r.leftover, 0);
}

TEST(Scheduler, StreamAccumulatesConsecutiveEasy) {
  Rig s;
  const std::vector<SampleKey> stream{World::easy(1), World::easy(2), World::hard(3)};
  const auto r = run_stream(s.make(Strategy::kSsb), stream);
  EXPECT_EQ(r.outcomes[2].extension, 980);
}

TEST(Scheduler, StreamHasNoRetroactiveGrants) {
  Rig s;
  const std::vector<SampleKey> stream{World::hard(3), World::easy(1)};
  const auto r = run_stream(s.make(Strategy::kSsb), stream);
  EXPECT_EQ(r.outcomes[0].extension, 0);
  EXPECT_EQ(r.leftover, 490);
}

TEST(Scheduler, StreamCapsAndRoundsGrants) {
  Rig s;
  // Five easy SSB-CE instances save 8,950; the next hard DE run can absorb 1,980.
  std::vector<SampleKey> stream;
  for (int r = 1; r <= 5; ++r) stream.push_back(World::easy(r));
  stream.push_back(World::hard(1));  // run 1 picks DE
  const auto r = run_stream(s.make(Strategy::kSsbCe), stream);
  EXPECT_EQ(r.outcomes[5].chosen, SolverId::kDe);
  EXPECT_EQ(r.outcomes[5].extension, 1980);
  EXPECT_EQ(r.leftover, 5 * 1790 - 1980);
}

TEST(Scheduler, BatchSplitsTheSavingEqually) {
  Rig s;
  std::vector<SampleKey> batch{World::easy(1), World::easy(2)};
  for (int r = 1; r <= 10; ++r) batch.push_back(World::hard(r));
  const auto r = run_batch(s.make(Strategy::kSsb), batch);
  EXPECT_EQ(r.plan.easy, 2);
  EXPECT_EQ(r.plan.hard, 10);
  EXPECT_EQ(r.plan.saved, 980);
  EXPECT_EQ(r.plan.extension, 98);
  for (std::size_t i = 2; i < r.outcomes.size(); ++i) {
    EXPECT_EQ(r.outcomes[i].extension, whole_generations(98, r.outcomes[i].chosen));
  }
  EXPECT_EQ(r.plan.granted + r.plan.unspent, r.plan.saved);
  EXPECT_TRUE(r.ledger.conserved());
}

TEST(Scheduler, BatchWithoutEasyMatchesNone) {
  Rig s;
  std::vector<SampleKey> batch;
  for (int r = 1; r <= 6; ++r) batch.push_back(World::hard(r));
  const auto a = run_batch(s.make(Strategy::kSsb), batch);
  const auto b = run_batch(s.make(Strategy::kNone), batch);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    EXPECT_EQ(a.outcomes[i].extension, 0);
    EXPECT_EQ(a.outcomes[i].final_error, b.outcomes[i].final_error);
  }
}

TEST(Scheduler, BatchWithoutHardReportsEverythingUnspent) {
  Rig s;
  const std::vector<SampleKey> batch{World::easy(1), World::easy(2)};
  const auto r = run_batch(s.make(Strategy::kSsbCe), batch);
  EXPECT_EQ(r.plan.extension, 0);
  EXPECT_EQ(r.plan.unspent, 2 * 1790);
}

TEST(Scheduler, NoneIsTheSameInBatchAndStream) {
  Rig s;
  std::mt19937_64 rng(5);
  const auto items = random_stream(rng, 60);
  const auto a = run_batch(s.make(Strategy::kNone), items);
  const auto b = run_stream(s.make(Strategy::kNone), items);
  for (std::size_t i = 0; i < items.size(); ++i) {
    EXPECT_EQ(a.outcomes[i].final_error, b.outcomes[i].final_error);
    EXPECT_EQ(a.outcomes[i].chosen, b.outcomes[i].chosen);
  }
}

TEST(Scheduler, ConservationOverRandomStreams) {
  Rig s;
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const auto items = random_stream(rng, 200);
    for (auto strategy : {Strategy::kNone, Strategy::kSsb, Strategy::kSsbCe}) {
      const auto p = s.make(strategy);
      BudgetLedger ledger;
      long long granted = 0;
      for (const auto& k : items) {
        const auto a = p.assess(k);
        int grant = 0;
        if (a.verdict == Hardness::kHard) {
          grant = whole_generations(static_cast<int>(std::min<long long>(ledger.pool(), p.policy().max_grant())), a.chosen);
        }
        granted += p.finish(a, ledger, grant).extension;
        ASSERT_EQ(ledger.nominal(), ledger.spent() + ledger.granted() + ledger.pool() + ledger.forfeited());
      }
      const auto r = run_stream(p, items);
      EXPECT_EQ(r.ledger.nominal(), 200LL * 4560);
      EXPECT_EQ(r.ledger.granted(), granted);
      const auto b = run_batch(p, items);
      EXPECT_TRUE(b.ledger.conserved());
      EXPECT_EQ(b.plan.granted + b.plan.unspent, b.plan.saved);
    }
  }
}

TEST(Scheduler, StreamGrantsAreCausal) {
  Rig s;
  std::mt19937_64 rng(77);
  const auto items = random_stream(rng, 120);
  const auto full = run_stream(s.make(Strategy::kSsbCe), items);
  for (std::size_t cut : {1u, 17u, 60u, 119u}) {
    const auto part = run_stream(s.make(Strategy::kSsbCe), std::span(items).first(cut));
    for (std::size_t i = 0; i < cut; ++i) {
      ASSERT_EQ(part.outcomes[i].extension, full.outcomes[i].extension);
      ASSERT_EQ(part.outcomes[i].final_error, full.outcomes[i].final_error);
    }
  }
}

TEST(Scheduler, CumulativeGainExamples) {
  PipelineOutcome a;
  a.key = {FunctionId{1}, 1, 1};
  a.final_error = 1.0;
  PipelineOutcome base = a;
  base.final_error = 2.0;
  const std::vector<PipelineOutcome> one{a}, base_one{base};
  EXPECT_EQ(cumulative_gain(one, base_one), std::vector<double>{1.0});
  EXPECT_EQ(cumulative_gain(base_one, base_one), std::vector<double>{0.0});
  PipelineOutcome other = base;
  other.key.run = 2;
  const std::vector<PipelineOutcome> shifted{other};
  EXPECT_THROW(cumulative_gain(one, shifted), AuditError);
  const std::vector<double> errs{3.0, 1.0};
  const std::vector<PipelineOutcome> two{a, a};
  EXPECT_EQ(cumulative_gain(two, errs), (std::vector<double>{2.0, 2.0}));
}

TEST(Scheduler, BootstrapDrawsOnlyFromThePool) {
  const std::vector<SampleKey> pool{{FunctionId{1}, 1, 1}, {FunctionId{2}, 3, 4}, {FunctionId{5}, 2, 2}};
  const auto a = bootstrap_stream("s", pool, 20, 120, 9);
  const auto b = bootstrap_stream("s", pool, 20, 120, 9);
  EXPECT_EQ(a.items.size(), 2400u);
  EXPECT_EQ(a.items, b.items);
  const std::set<SampleKey> allowed(pool.begin(), pool.end());
  std::set<SampleKey> seen;
  for (const auto& k : a.items) {
    EXPECT_TRUE(allowed.contains(k));
    seen.insert(k);
  }
  EXPECT_EQ(seen.size(), 3u);
  EXPECT_NE(bootstrap_stream("s", pool, 20, 120, 10).items, a.items);
  EXPECT_THROW(bootstrap_stream("s", {}, 1, 1, 1), ConfigError);
}

TEST(Scheduler, StreamSpecRoundTrip) {
  TempDir dir("stream");
  const std::vector<SampleKey> pool{{FunctionId{1}, 1, 1}, {FunctionId{2}, 3, 4}};
  const auto spec = bootstrap_stream("s", pool, 3, 5, 1);
  write_stream_spec(dir.path() / "s.tsv", spec, "abcd");
  EXPECT_EQ(read_stream_spec(dir.path() / "s.tsv", "abcd").items, spec.items);
  EXPECT_THROW(read_stream_spec(dir.path() / "s.tsv", "dcba"), DataError);
}
