#include <gtest/gtest.h>

#include "easyfilter/config.hpp"
#include "easyfilter/errors.hpp"

using namespace easyfilter;

TEST(Config, DeskDefaults) {
  const auto c = desk_config();
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.archive.functions.size(), 12u);
  EXPECT_EQ(c.archive.instances, 5);
  EXPECT_EQ(c.archive.dimension, 10);
  EXPECT_EQ(c.archive.hardness_runs, 20);
  EXPECT_EQ(c.budgets.phi_h, 70);
  EXPECT_EQ(c.budgets.phi_as, 560);
  EXPECT_EQ(c.budgets.b_h_curtailed, 2700);
  EXPECT_EQ(c.budgets.curtail, CurtailMode::kFixed);
  EXPECT_EQ(c.splits, 5);
  EXPECT_EQ(c.stream_blocks * c.stream_block_size, 2400);
  EXPECT_EQ(c.training.epochs, 200);
  EXPECT_EQ(c.training.hidden, 32);
}

TEST(Config, MinimalFileReproducesTheDefaults) {
  const auto c = parse_config(R"({"schema_version": 1})");
  EXPECT_EQ(c.hash(), desk_config().hash());
}

TEST(Config, DumpParsesBack) {
  auto c = desk_config();
  c.archive.hardness_runs = 30;
  c.strategies = {Strategy::kSsbCe};
  c.training.learning_rate = 5e-4;
  const auto back = parse_config(dump_config(c));
  EXPECT_EQ(back.hash(), c.hash());
  EXPECT_EQ(dump_config(back), dump_config(c));
}

TEST(Config, UnknownKeysAreRejected) {
  EXPECT_THROW(parse_config(R"({"schema_version": 1, "colour": "red"})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"schema_version": 1, "runs": {"hardnes": 20}})"), ConfigError);
}

TEST(Config, SchemaVersionIsRequired) {
  EXPECT_THROW(parse_config(R"({})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"schema_version": 2})"), ConfigError);
  EXPECT_THROW(parse_config("not json"), ConfigError);
}

TEST(Config, BadValuesAreConfigErrors) {
  EXPECT_THROW(parse_config(R"({"schema_version": 1, "runs": {"hardness": 5}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"schema_version": 1, "splits": 4})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"schema_version": 1, "strategies": ["greedy"]})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"schema_version": 1, "suite": {"functions": [1, 99]}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"schema_version": 1, "workers": "many"})"), ConfigError);
}

TEST(Config, HashTracksResultsNotSelection) {
  const auto base = desk_config();
  auto c = base;
  c.seed = 9;
  c.workers = 4;
  c.output_dir = "elsewhere";
  c.strategies = {Strategy::kNone};
  EXPECT_EQ(c.hash(), base.hash());
  c = base;
  c.training.learning_rate = 1e-4;
  EXPECT_NE(c.hash(), base.hash());
  c = base;
  c.budgets.curtail = CurtailMode::kAdaptive;
  EXPECT_NE(c.hash(), base.hash());
  EXPECT_EQ(base.hash().size(), 16u);
}

TEST(Config, PolicyCarriesTheStrategy) {
  const auto c = desk_config();
  EXPECT_EQ(c.policy(Strategy::kSsb).strategy, Strategy::kSsb);
  EXPECT_EQ(c.policy(Strategy::kSsb).nominal(), 4560);
}

TEST(Config, MissingFileIsAConfigError) {
  EXPECT_THROW(load_config("/nonexistent/easyfilter.json"), ConfigError);
}
