// DE/rand/1/bin with F = 0.5 and CR = 0.9; synchronous generations.

#include <algorithm>
#include <limits>
#include <random>
#include <vector>

#include "easyfilter/solvers.hpp"

namespace easyfilter {

namespace {

class DifferentialEvolution final : public Optimizer {
 public:
  static constexpr double kWeight = 0.5;
  static constexpr double kCrossover = 0.9;

  DifferentialEvolution(const ProblemInstance& inst, std::uint64_t seed)
      : inst_(inst), rng_(seed), d_(inst.dimension()), np_(population_of(SolverId::kDe)) {}

  int population() const noexcept override { return np_; }

  double step() override {
    const auto np = static_cast<std::size_t>(np_);
    const auto d = static_cast<std::size_t>(d_);
    double gen_best = std::numeric_limits<double>::infinity();
    if (pop_.empty()) {
      std::uniform_real_distribution<double> unif(kDomain.lower, kDomain.upper);
      pop_.assign(np, std::vector<double>(d));
      fitness_.resize(np);
      for (std::size_t i = 0; i < np; ++i) {
        for (auto& v : pop_[i]) v = unif(rng_);
        fitness_[i] = inst_.error(pop_[i]);
        gen_best = std::min(gen_best, fitness_[i]);
      }
      return gen_best;
    }

    std::uniform_int_distribution<std::size_t> pick(0, np - 1);
    std::uniform_int_distribution<std::size_t> pick_dim(0, d - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<double>> trials(np, std::vector<double>(d));
    for (std::size_t i = 0; i < np; ++i) {
      std::size_t r1, r2, r3;
      do { r1 = pick(rng_); } while (r1 == i);
      do { r2 = pick(rng_); } while (r2 == i || r2 == r1);
      do { r3 = pick(rng_); } while (r3 == i || r3 == r1 || r3 == r2);
      const std::size_t forced = pick_dim(rng_);
      for (std::size_t j = 0; j < d; ++j) {
        const bool take = unit(rng_) < kCrossover || j == forced;
        const double v = take ? pop_[r1][j] + kWeight * (pop_[r2][j] - pop_[r3][j]) : pop_[i][j];
        trials[i][j] = kDomain.clamp(v);
      }
    }
    for (std::size_t i = 0; i < np; ++i) {
      const double f = inst_.error(trials[i]);
      gen_best = std::min(gen_best, f);
      if (f <= fitness_[i]) {
        pop_[i] = std::move(trials[i]);
        fitness_[i] = f;
      }
    }
    return gen_best;
  }

 private:
  const ProblemInstance& inst_;
  std::mt19937_64 rng_;
  int d_;
  int np_;
  std::vector<std::vector<double>> pop_;
  std::vector<double> fitness_;
};

}  // namespace

std::unique_ptr<Optimizer> make_differential_evolution(const ProblemInstance& inst, std::uint64_t seed) {
  return std::make_unique<DifferentialEvolution>(inst, seed);
}

}  // namespace easyfilter
