#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "easyfilter/gru.hpp"
#include "easyfilter/pipeline.hpp"
#include "easyfilter/scheduler.hpp"
#include "easyfilter/solvers.hpp"
#include "easyfilter/suite.hpp"

using namespace easyfilter;

namespace {

void BM_FunctionEvaluate(benchmark::State& state) {
  const auto inst = generate_instance(FunctionId{static_cast<int>(state.range(0))}, 1, 10);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5, 5);
  std::vector<double> x(10);
  for (auto& v : x) v = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(inst.evaluate(x));
}
BENCHMARK(BM_FunctionEvaluate)->Arg(1)->Arg(8)->Arg(21);

void BM_SolverGeneration(benchmark::State& state) {
  const auto inst = generate_instance(FunctionId{8}, 1, 10);
  const auto solver = static_cast<SolverId>(state.range(0));
  auto opt = make_optimizer(inst, solver, 11);
  for (auto _ : state) benchmark::DoNotOptimize(opt->step());
  state.SetItemsProcessed(state.iterations() * opt->population());
}
BENCHMARK(BM_SolverGeneration)->Arg(0)->Arg(1)->Arg(2);

std::vector<Eigen::MatrixXd> random_batch(int length, int batch) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0, 1);
  std::vector<Eigen::MatrixXd> steps;
  for (int t = 0; t < length; ++t) {
    Eigen::MatrixXd m(1, batch);
    for (int j = 0; j < batch; ++j) m(0, j) = n(rng);
    steps.push_back(m);
  }
  return steps;
}

void BM_GruLossAndGradient(benchmark::State& state) {
  Gru net(1, 32, 3);
  net.initialize(5);
  const auto steps = random_batch(static_cast<int>(state.range(0)), 16);
  std::vector<int> labels(16, 1);
  Eigen::VectorXd grad;
  for (auto _ : state) benchmark::DoNotOptimize(net.loss(steps, labels, &grad));
}
BENCHMARK(BM_GruLossAndGradient)->Arg(7)->Arg(21);

// Synthetic runs so the scheduler is measured without an archive on disk.
class SyntheticRuns final : public RunSource {
 public:
  explicit SyntheticRuns(int horizon) {
    for (auto s : kPortfolio) {
      RunRecord& r = records_[static_cast<std::size_t>(index_of(s))];
      r.config = SolverConfig::make(s, 1, horizon / population_of(s) * population_of(s));
      double v = 1e3;
      for (int g = 0; g < r.config.max_evaluations / population_of(s); ++g) r.best_so_far.push_back(v *= 0.97);
    }
  }
  const RunRecord& record(const SampleKey&, SolverId solver) const override {
    return records_[static_cast<std::size_t>(index_of(solver))];
  }

 private:
  std::array<RunRecord, 3> records_;
};

class Alternating final : public HardnessPredictor {
 public:
  Hardness predict(const SampleKey& key, const ProbingTrajectory&) const override {
    return key.run % 3 == 0 ? Hardness::kEasy : Hardness::kHard;
  }
};

void BM_Stream(benchmark::State& state) {
  BudgetPolicy policy;
  policy.strategy = Strategy::kSsb;
  const SyntheticRuns runs(policy.horizon);
  const Alternating hardness;
  const FixedSelector selector(SolverId::kDe);
  const Pipeline p(runs, hardness, selector, policy);
  std::vector<SampleKey> stream;
  for (int i = 0; i < static_cast<int>(state.range(0)); ++i) stream.push_back({FunctionId{1}, 1, i});
  for (auto _ : state) benchmark::DoNotOptimize(run_stream(p, stream).leftover);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Stream)->Arg(200)->Arg(2400);

}  // namespace

BENCHMARK_MAIN();
