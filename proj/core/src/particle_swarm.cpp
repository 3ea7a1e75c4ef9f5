// Global-best PSO with constriction-equivalent inertia 0.729 and acceleration
// coefficients 1.49445; positions clamped to the box, velocities to its width.

#include <algorithm>
#include <limits>
#include <random>
#include <vector>

#include "easyfilter/solvers.hpp"

namespace easyfilter {

namespace {

class ParticleSwarm final : public Optimizer {
 public:
  static constexpr double kInertia = 0.729;
  static constexpr double kCognitive = 1.49445;
  static constexpr double kSocial = 1.49445;

  ParticleSwarm(const ProblemInstance& inst, std::uint64_t seed)
      : inst_(inst), rng_(seed), d_(inst.dimension()), np_(population_of(SolverId::kPso)) {}

  int population() const noexcept override { return np_; }

  double step() override {
    const auto np = static_cast<std::size_t>(np_);
    const auto d = static_cast<std::size_t>(d_);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double vmax = kDomain.width();

    if (pos_.empty()) {
      std::uniform_real_distribution<double> unif(kDomain.lower, kDomain.upper);
      pos_.assign(np, std::vector<double>(d));
      vel_.assign(np, std::vector<double>(d));
      for (std::size_t i = 0; i < np; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
          pos_[i][j] = unif(rng_);
          vel_[i][j] = 0.5 * (unif(rng_) - pos_[i][j]);
        }
      }
      best_pos_ = pos_;
      best_fit_.assign(np, std::numeric_limits<double>::infinity());
    } else {
      for (std::size_t i = 0; i < np; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
          double v = kInertia * vel_[i][j] + kCognitive * unit(rng_) * (best_pos_[i][j] - pos_[i][j]) +
                     kSocial * unit(rng_) * (global_pos_[j] - pos_[i][j]);
          v = std::clamp(v, -vmax, vmax);
          double p = pos_[i][j] + v;
          if (p < kDomain.lower || p > kDomain.upper) {
            p = kDomain.clamp(p);
            v = 0.0;
          }
          pos_[i][j] = p;
          vel_[i][j] = v;
        }
      }
    }

    double gen_best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < np; ++i) {
      const double f = inst_.error(pos_[i]);
      gen_best = std::min(gen_best, f);
      if (f < best_fit_[i]) {
        best_fit_[i] = f;
        best_pos_[i] = pos_[i];
      }
      if (f < global_fit_) {
        global_fit_ = f;
        global_pos_ = pos_[i];
      }
    }
    return gen_best;
  }

 private:
  const ProblemInstance& inst_;
  std::mt19937_64 rng_;
  int d_;
  int np_;
  std::vector<std::vector<double>> pos_, vel_, best_pos_;
  std::vector<double> best_fit_;
  std::vector<double> global_pos_;
  double global_fit_ = std::numeric_limits<double>::infinity();
};

}  // namespace

std::unique_ptr<Optimizer> make_particle_swarm(const ProblemInstance& inst, std::uint64_t seed) {
  return std::make_unique<ParticleSwarm>(inst, seed);
}

}  // namespace easyfilter
