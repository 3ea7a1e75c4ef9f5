// (mu/mu_w, lambda)-CMA-ES with cumulative step-size adaptation and combined
// rank-one / rank-mu covariance update. Population fixed by the portfolio.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "easyfilter/solvers.hpp"

namespace easyfilter {

namespace {

// Piecewise linear-quadratic map of R onto [lower, upper]: identity in the
// interior, quadratic within `a` of each bound, periodic reflection beyond.
double to_box(double x) {
  const double lb = kDomain.lower, ub = kDomain.upper;
  const double al = std::min((ub - lb) / 2.0, (1.0 + std::abs(lb)) / 20.0);
  const double au = std::min((ub - lb) / 2.0, (1.0 + std::abs(ub)) / 20.0);
  if (x < lb - 2 * al - (ub - lb) / 2.0 || x > ub + 2 * au + (ub - lb) / 2.0) {
    const double r = 2 * (ub - lb + al + au);
    const double s = lb - 2 * al - (ub - lb) / 2.0;
    x -= r * std::floor((x - s) / r);
  }
  if (x > ub + au) x -= 2 * (x - ub - au);
  if (x < lb - al) x += 2 * (lb - al - x);
  if (x < lb + al) return lb + (x - (lb - al)) * (x - (lb - al)) / 4.0 / al;
  if (x > ub - au) return ub - (x - (ub + au)) * (x - (ub + au)) / 4.0 / au;
  return x;
}

using Eigen::MatrixXd;
using Eigen::VectorXd;

class CmaEs final : public Optimizer {
 public:
  CmaEs(const ProblemInstance& inst, std::uint64_t seed)
      : inst_(inst), rng_(seed), n_(inst.dimension()), lambda_(population_of(SolverId::kCmaEs)) {
    const double n = n_;
    mu_ = lambda_ / 2;
    // Default parameterization including negative weights for the worst
    // lambda - mu candidates (active covariance update).
    Eigen::VectorXd raw(lambda_);
    for (int i = 0; i < lambda_; ++i) raw(i) = std::log((lambda_ + 1) / 2.0) - std::log(i + 1.0);
    const Eigen::VectorXd pos = raw.head(mu_);
    const Eigen::VectorXd neg = raw.tail(lambda_ - mu_);
    mueff_ = pos.sum() * pos.sum() / pos.squaredNorm();
    const double mueff_neg = neg.sum() * neg.sum() / neg.squaredNorm();

    cs_ = (mueff_ + 2.0) / (n + mueff_ + 5.0);
    ds_ = 1.0 + 2.0 * std::max(0.0, std::sqrt((mueff_ - 1.0) / (n + 1.0)) - 1.0) + cs_;
    cc_ = (4.0 + mueff_ / n) / (n + 4.0 + 2.0 * mueff_ / n);
    c1_ = 2.0 / ((n + 1.3) * (n + 1.3) + mueff_);
    cmu_ = std::min(1.0 - c1_, 2.0 * (mueff_ - 2.0 + 1.0 / mueff_) / ((n + 2.0) * (n + 2.0) + mueff_));

    const double alpha_mu = 1.0 + c1_ / cmu_;
    const double alpha_mueff = 1.0 + 2.0 * mueff_neg / (mueff_ + 2.0);
    const double alpha_posdef = (1.0 - c1_ - cmu_) / (n * cmu_);
    const double neg_scale = std::min({alpha_mu, alpha_mueff, alpha_posdef}) / -neg.sum();
    weights_.resize(lambda_);
    weights_.head(mu_) = pos / pos.sum();
    weights_.tail(lambda_ - mu_) = neg * neg_scale;
    chi_n_ = std::sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));

    std::uniform_real_distribution<double> unif(kDomain.lower, kDomain.upper);
    mean_.resize(n_);
    for (int i = 0; i < n_; ++i) mean_(i) = unif(rng_);
    sigma_ = 0.4 * kDomain.width();
    cov_ = MatrixXd::Identity(n_, n_);
    basis_ = MatrixXd::Identity(n_, n_);
    scales_ = VectorXd::Ones(n_);
    ps_ = VectorXd::Zero(n_);
    pc_ = VectorXd::Zero(n_);
    steps_.resize(n_, lambda_);
    errors_.resize(static_cast<std::size_t>(lambda_));
    order_.resize(static_cast<std::size_t>(lambda_));
  }

  int population() const noexcept override { return lambda_; }

  double step() override {
    VectorXd z(n_);
    std::vector<double> x(static_cast<std::size_t>(n_));
    for (int k = 0; k < lambda_; ++k) {
      for (int i = 0; i < n_; ++i) z(i) = normal_(rng_);
      steps_.col(k) = basis_ * scales_.cwiseProduct(z);
      // The search state is unconstrained; candidates are mapped into the box.
      for (int i = 0; i < n_; ++i) x[static_cast<std::size_t>(i)] = to_box(mean_(i) + sigma_ * steps_(i, k));
      errors_[static_cast<std::size_t>(k)] = inst_.error(x);
    }
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](int a, int b) { return errors_[static_cast<std::size_t>(a)] < errors_[static_cast<std::size_t>(b)]; });

    VectorXd yw = VectorXd::Zero(n_);
    for (int i = 0; i < mu_; ++i) yw += weights_(i) * steps_.col(order_[static_cast<std::size_t>(i)]);
    mean_ += sigma_ * yw;

    const MatrixXd inv_sqrt = basis_ * scales_.cwiseInverse().asDiagonal() * basis_.transpose();
    ps_ = (1.0 - cs_) * ps_ + std::sqrt(cs_ * (2.0 - cs_) * mueff_) * (inv_sqrt * yw);
    ++generation_;
    const double ps_norm = ps_.norm();
    const double hsig_denom = std::sqrt(1.0 - std::pow(1.0 - cs_, 2.0 * generation_));
    const bool hsig = ps_norm / hsig_denom / chi_n_ < 1.4 + 2.0 / (n_ + 1.0);
    pc_ = (1.0 - cc_) * pc_ + (hsig ? std::sqrt(cc_ * (2.0 - cc_) * mueff_) : 0.0) * yw;

    MatrixXd rank_mu = MatrixXd::Zero(n_, n_);
    for (int i = 0; i < lambda_; ++i) {
      const auto col = steps_.col(order_[static_cast<std::size_t>(i)]);
      double w = weights_(i);
      if (w < 0) w *= n_ / std::max(1e-300, (inv_sqrt * col).squaredNorm());
      rank_mu.noalias() += w * col * col.transpose();
    }
    const double hsig_correction = hsig ? 0.0 : cc_ * (2.0 - cc_);
    cov_ = (1.0 + c1_ * hsig_correction - c1_ - cmu_ * weights_.sum()) * cov_ + c1_ * pc_ * pc_.transpose() +
           cmu_ * rank_mu;
    cov_ = 0.5 * (cov_ + cov_.transpose());

    sigma_ *= std::exp((cs_ / ds_) * (ps_norm / chi_n_ - 1.0));
    sigma_ = std::clamp(sigma_, 1e-300, 1e300);

    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(cov_);
    if (eig.info() == Eigen::Success) {
      basis_ = eig.eigenvectors();
      scales_ = eig.eigenvalues().cwiseMax(1e-300).cwiseSqrt();
    }

    return *std::min_element(errors_.begin(), errors_.end());
  }

 private:
  const ProblemInstance& inst_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  int n_;
  int lambda_;
  int mu_ = 0;
  VectorXd weights_;
  double mueff_ = 0, cs_ = 0, ds_ = 0, cc_ = 0, c1_ = 0, cmu_ = 0, chi_n_ = 0;
  VectorXd mean_;
  double sigma_ = 0;
  MatrixXd cov_, basis_;
  VectorXd scales_, ps_, pc_;
  MatrixXd steps_;
  std::vector<double> errors_;
  std::vector<int> order_;
  int generation_ = 0;
};

}  // namespace

std::unique_ptr<Optimizer> make_cmaes(const ProblemInstance& inst, std::uint64_t seed) {
  return std::make_unique<CmaEs>(inst, seed);
}

}  // namespace easyfilter
