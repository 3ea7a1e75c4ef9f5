#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace easyfilter {

// Single-layer GRU over scalar-or-vector sequences followed by a linear head
// and softmax:
//   z = σ(Wz x + Uz h + bz), r = σ(Wr x + Ur h + br),
//   n = tanh(Wn x + Un (r ∘ h) + bn), h' = (1 − z) ∘ n + z ∘ h,
//   p = softmax(V h_T + c).
// All parameters live in one flat vector so optimizers and gradient checks
// can treat the network as a function of a single vector.
class Gru {
 public:
  Gru(int input, int hidden, int classes);

  int input() const noexcept { return input_; }
  int hidden() const noexcept { return hidden_; }
  int classes() const noexcept { return classes_; }
  static std::size_t parameter_count(int input, int hidden, int classes);

  Eigen::VectorXd& parameters() noexcept { return theta_; }
  const Eigen::VectorXd& parameters() const noexcept { return theta_; }

  /// Uniform in ±1/sqrt(hidden).
  void initialize(std::uint64_t seed);

  // A batch is time-major: steps[t] is input × batch. Returns classes × batch
  // probabilities.
  Eigen::MatrixXd forward(const std::vector<Eigen::MatrixXd>& steps) const;

  // Mean cross-entropy over the batch; when `grad` is non-null it receives
  // the gradient with respect to parameters().
  double loss(const std::vector<Eigen::MatrixXd>& steps, std::span<const int> labels, Eigen::VectorXd* grad) const;

 private:
  int input_, hidden_, classes_;
  Eigen::VectorXd theta_;
};

/// Packs equal-length sequences of `input`-wide frames into time-major batches.
std::vector<Eigen::MatrixXd> to_steps(const std::vector<const std::vector<double>*>& sequences, int input);

struct Adam {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void step(Eigen::VectorXd& theta, const Eigen::VectorXd& grad);

 private:
  Eigen::VectorXd m_, v_;
  long long t_ = 0;
};

}  // namespace easyfilter
