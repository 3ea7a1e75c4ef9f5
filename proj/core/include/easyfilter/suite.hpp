#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace easyfilter {

/// Index of a benchmark function in the noiseless BBOB numbering (1..24).
struct FunctionId {
  int value = 0;
  friend constexpr auto operator<=>(FunctionId, FunctionId) = default;
};

struct FunctionInfo {
  FunctionId id;
  std::string_view name;
  bool separable;
  bool multimodal;
};

/// Box constraint shared by every instance.
struct SearchDomain {
  double lower = -5.0;
  double upper = 5.0;

  double width() const noexcept { return upper - lower; }
  bool contains(std::span<const double> x) const noexcept;
  double clamp(double v) const noexcept { return v < lower ? lower : (v > upper ? upper : v); }
};

inline constexpr SearchDomain kDomain{};

// Transformed benchmark function. Immutable after generation and safe to
// share between threads; evaluation is pure.
class ProblemInstance {
 public:
  FunctionId function() const noexcept { return function_; }
  int instance_seed() const noexcept { return instance_seed_; }
  int dimension() const noexcept { return static_cast<int>(x_opt_.size()); }
  const Eigen::VectorXd& x_opt() const noexcept { return x_opt_; }
  double f_opt() const noexcept { return f_opt_; }
  /// Primary rotation; identity for separable functions.
  const Eigen::MatrixXd& rotation() const noexcept { return rotation_; }
  /// Second rotation used by functions of the form Q Λ R; identity otherwise.
  const Eigen::MatrixXd& second_rotation() const noexcept { return second_rotation_; }
  /// Random ±1 vector used by F20 and F24.
  const Eigen::VectorXd& signs() const noexcept { return signs_; }

  // Gallagher peak data (F21/F22); empty for other functions. Columns are
  // rotated peak centers and the matching diagonal conditioning.
  const Eigen::MatrixXd& peak_centers() const noexcept { return peak_centers_; }
  const Eigen::MatrixXd& peak_scales() const noexcept { return peak_scales_; }
  const Eigen::VectorXd& peak_weights() const noexcept { return peak_weights_; }

  /// Raw fitness f(x).
  double evaluate(std::span<const double> x) const;
  /// f(x) - f_opt, computed without adding the offset so no cancellation occurs.
  double error(std::span<const double> x) const;

  bool operator==(const ProblemInstance&) const = default;

 private:
  friend ProblemInstance generate_instance(FunctionId, int, int);

  FunctionId function_{};
  int instance_seed_ = 0;
  Eigen::VectorXd x_opt_;
  double f_opt_ = 0.0;
  Eigen::MatrixXd rotation_;
  Eigen::MatrixXd second_rotation_;
  Eigen::VectorXd signs_;
  Eigen::MatrixXd peak_centers_;
  Eigen::MatrixXd peak_scales_;
  Eigen::VectorXd peak_weights_;
};

/// All 24 noiseless functions, in id order.
const std::vector<FunctionInfo>& function_registry();
std::vector<FunctionId> registered_functions();
bool is_registered(FunctionId id) noexcept;
/// Throws RegistrationError for unknown ids.
const FunctionInfo& function_info(FunctionId id);

/// Deterministic in (function, instance_seed, d). x_opt is uniform in
/// [-4, 4]^d except where the function pins it (F5 at the boundary, F8
/// scaled to [-3, 3], F9/F19 by the rotation, F20 and F24 by fixed
/// magnitudes); f_opt is uniform in [-100, 100].
ProblemInstance generate_instance(FunctionId function, int instance_seed, int d);

inline double evaluate(const ProblemInstance& inst, std::span<const double> x) {
  return inst.evaluate(x);
}

// One-line text descriptor: function id, seed, dimension and f_opt. Only
// these are stored; the rest is regenerated from the seed on parse.
std::string describe(const ProblemInstance& inst);
ProblemInstance parse_descriptor(std::string_view line);

}  // namespace easyfilter
