#include <CLI11.hpp>
#include <iostream>
#include <optional>

#include "easyfilter/errors.hpp"
#include "easyfilter_tools/commands.hpp"

using namespace easyfilter;
using namespace easyfilter::cli;

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> strategy, selector, setting, output;
};

ExperimentConfig resolve(const Flags& f) {
  ExperimentConfig c = f.config.empty() ? desk_config() : load_config(f.config);
  if (f.seed) c.seed = *f.seed;
  if (f.workers) c.workers = *f.workers;
  if (f.strategy) c.strategies = {parse_strategy(*f.strategy)};
  if (f.selector) c.selectors = {parse_selector_kind(*f.selector)};
  if (f.setting) c.settings = {parse_setting(*f.setting)};
  if (f.output) c.output_dir = *f.output;
  c.validate();
  return c;
}

int run(const std::string& command, const Flags& flags) {
  const ExperimentConfig c = resolve(flags);
  if (command == "generate") {
    cmd_generate(c, std::cerr);
    return kExitOk;
  }
  if (command == "report") {
    cmd_report(c, c.seed, std::cerr);
    return kExitOk;
  }
  const RunArchive archive = open_archive(c);
  if (command == "label") {
    cmd_label(c, archive, std::cerr);
    return kExitOk;
  }
  const LabelSet labels = load_labels(c);
  if (command == "train") {
    cmd_train(c, c.seed, archive, labels, std::cerr);
    return kExitOk;
  }
  const TrainingResult training = load_training(c, c.seed, archive, labels);
  cmd_evaluate(c, c.seed, archive, labels, training, default_options(c), std::cerr);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"easyfilter: hardness filter and budget re-allocation experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags flags;
  app.add_option("--config", flags.config, "experiment config (JSON); desk defaults when omitted");
  app.add_option("--seed", flags.seed, "experiment seed for splits, training and streams");
  app.add_option("--workers", flags.workers, "worker threads for generate");
  app.add_option("--strategy", flags.strategy, "restrict evaluate to one strategy")
      ->check(CLI::IsMember({"none", "ssb", "ssb-ce"}));
  app.add_option("--selector", flags.selector, "restrict evaluate to one selector")
      ->check(CLI::IsMember({"vbs", "trained"}));
  app.add_option("--setting", flags.setting, "restrict evaluate to one setting")
      ->check(CLI::IsMember({"batch", "stream"}));
  app.add_option("--output", flags.output, "override output_dir");

  std::string command;
  const std::pair<const char*, const char*> subcommands[] = {
      {"generate", "run every solver on every sample to the horizon (resumable)"},
      {"label", "hardness and best-solver labels from the archive"},
      {"train", "cross-validated hardness and selector models for one seed"},
      {"evaluate", "batch and stream runs of the pipeline on each split"},
      {"report", "loss tables, stream summaries and plots"},
  };
  for (const auto& [name, help] : subcommands) {
    app.add_subcommand(name, help)->callback([&command, name = name] { command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    return run(command, flags);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IncompleteArchiveError& e) {
    std::cerr << "incomplete archive: " << e.what() << "\n";
    return kExitIncomplete;
  } catch (const TrainingError& e) {
    std::cerr << "training failed: " << e.what() << "\n";
    return kExitTraining;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
}
