#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "easyfilter/errors.hpp"
#include "easyfilter/trajectory.hpp"

using namespace easyfilter;

namespace {

ProbingTrajectory probe(SolverId s, std::vector<double> v) {
  return ProbingTrajectory{s, std::move(v), 7 * population_of(s)};
}

}  // namespace

TEST(Trajectory, SignedLogValues) {
  const std::vector<double> v{0.0, 9.0, -99.0, 999.0};
  const auto s = signed_log(v);
  EXPECT_DOUBLE_EQ(s[0], 0.0);
  EXPECT_DOUBLE_EQ(s[1], 1.0);
  EXPECT_DOUBLE_EQ(s[2], -2.0);
  EXPECT_DOUBLE_EQ(s[3], 3.0);
}

TEST(Trajectory, NormalizeStandardizes) {
  const std::vector<double> v{1000, 100, 10, 1, 0.1, 0.01, 0.001};
  const auto n = normalize(v);
  double mean = 0, sq = 0;
  for (double x : n) mean += x;
  mean /= n.size();
  for (double x : n) sq += (x - mean) * (x - mean);
  EXPECT_NEAR(mean, 0.0, 1e-12);
  EXPECT_NEAR(sq / n.size(), 1.0, 1e-12);
  EXPECT_GT(n.front(), n.back());
}

TEST(Trajectory, ConstantTrajectoryMapsToZeros) {
  const auto n = normalize(std::vector<double>(7, 3.5));
  for (double x : n) EXPECT_EQ(x, 0.0);
}

TEST(Trajectory, NormalizeRejectsBadInput) {
  EXPECT_THROW(normalize(std::vector<double>{}), DataError);
  EXPECT_THROW(normalize(std::vector<double>{1.0, std::numeric_limits<double>::quiet_NaN()}), DataError);
}

TEST(Trajectory, ConcatKeepsPortfolioOrderAndCost) {
  const auto c = concat(probe(SolverId::kCmaEs, std::vector<double>(7, 1.0)),
                        probe(SolverId::kDe, std::vector<double>(7, 2.0)),
                        probe(SolverId::kPso, std::vector<double>(7, 3.0)));
  EXPECT_EQ(c.total_cost, 560);
  const auto v = c.values();
  ASSERT_EQ(v.size(), 21u);
  EXPECT_EQ(v[0], 1.0);
  EXPECT_EQ(v[7], 2.0);
  EXPECT_EQ(v[20], 3.0);
  EXPECT_EQ(incremental_cost(c), 490);
}

TEST(Trajectory, ConcatRejectsMismatches) {
  EXPECT_THROW(concat(probe(SolverId::kCmaEs, std::vector<double>(7, 1.0)), probe(SolverId::kDe, std::vector<double>(6, 2.0)),
                      probe(SolverId::kPso, std::vector<double>(7, 3.0))),
               ContractError);
  EXPECT_THROW(concat(probe(SolverId::kDe, std::vector<double>(7, 1.0)), probe(SolverId::kCmaEs, std::vector<double>(7, 2.0)),
                      probe(SolverId::kPso, std::vector<double>(7, 3.0))),
               ContractError);
}
