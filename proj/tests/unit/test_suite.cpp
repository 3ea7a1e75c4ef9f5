#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "easyfilter/errors.hpp"
#include "easyfilter/suite.hpp"

using namespace easyfilter;

namespace {

std::vector<double> as_vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

TEST(Suite, RegistryHoldsTwentyFourFunctionsInOrder) {
  const auto ids = registered_functions();
  ASSERT_EQ(ids.size(), 24u);
  for (int i = 0; i < 24; ++i) EXPECT_EQ(ids[static_cast<std::size_t>(i)].value, i + 1);
  EXPECT_TRUE(function_info(FunctionId{1}).separable);
  EXPECT_FALSE(is_registered(FunctionId{25}));
}

TEST(Suite, UnknownFunctionIsRejected) {
  EXPECT_THROW(function_info(FunctionId{0}), RegistrationError);
  EXPECT_THROW(generate_instance(FunctionId{99}, 1, 10), RegistrationError);
}

TEST(Suite, InstancesAreDeterministicInSeed) {
  for (auto f : registered_functions()) {
    EXPECT_EQ(generate_instance(f, 3, 10), generate_instance(f, 3, 10)) << f.value;
  }
  EXPECT_NE(generate_instance(FunctionId{1}, 1, 10).x_opt(), generate_instance(FunctionId{1}, 2, 10).x_opt());
}

TEST(Suite, ErrorVanishesAtTheOptimum) {
  for (auto f : registered_functions()) {
    if (f.value == 5) continue;  // linear slope: optimum at the boundary corner, checked below
    const auto inst = generate_instance(f, 1, 10);
    const auto x = as_vec(inst.x_opt());
    EXPECT_NEAR(inst.error(x), 0.0, 1e-8) << "F" << f.value;
    EXPECT_NEAR(inst.evaluate(x), inst.f_opt(), 1e-6 * (1 + std::abs(inst.f_opt()))) << "F" << f.value;
  }
}

TEST(Suite, LinearSlopeOptimumOnTheBoundary) {
  const auto inst = generate_instance(FunctionId{5}, 2, 10);
  for (int i = 0; i < 10; ++i) EXPECT_DOUBLE_EQ(std::abs(inst.x_opt()(i)), 5.0);
  EXPECT_DOUBLE_EQ(inst.error(as_vec(inst.x_opt())), 0.0);
}

TEST(Suite, ErrorIsNonNegativeAwayFromOptimum) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5, 5);
  for (auto f : registered_functions()) {
    const auto inst = generate_instance(f, 4, 10);
    for (int k = 0; k < 20; ++k) {
      std::vector<double> x(10);
      for (auto& v : x) v = u(rng);
      EXPECT_GE(inst.error(x), 0.0) << "F" << f.value;
    }
  }
}

TEST(Suite, SphereErrorIsSquaredDistance) {
  const auto inst = generate_instance(FunctionId{1}, 1, 10);
  auto x = as_vec(inst.x_opt());
  x[0] += 1.0;
  x[3] -= 2.0;
  EXPECT_NEAR(inst.error(x), 5.0, 1e-12);
}

TEST(Suite, OptimumInsideTheDomain) {
  for (auto f : registered_functions()) {
    for (int seed = 1; seed <= 5; ++seed) {
      const auto inst = generate_instance(f, seed, 10);
      EXPECT_TRUE(kDomain.contains(as_vec(inst.x_opt()))) << "F" << f.value << " i" << seed;
      EXPECT_LE(std::abs(inst.f_opt()), 1000.0);
    }
  }
}

TEST(Suite, DescriptorRoundTrip) {
  const auto inst = generate_instance(FunctionId{21}, 5, 10);
  const auto back = parse_descriptor(describe(inst));
  EXPECT_EQ(back, inst);
  EXPECT_THROW(parse_descriptor("garbage"), Error);
}

TEST(Suite, DimensionIsRespected) {
  const auto inst = generate_instance(FunctionId{8}, 1, 5);
  EXPECT_EQ(inst.dimension(), 5);
  EXPECT_THROW(inst.error(std::vector<double>(10, 0.0)), ContractError);
}
