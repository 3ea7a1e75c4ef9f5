#include "easyfilter/config.hpp"

#include <algorithm>
#include <initializer_list>
#include <nlohmann/json.hpp>

#include "easyfilter/errors.hpp"
#include "easyfilter/io.hpp"
#include "easyfilter/text.hpp"

namespace easyfilter {

using nlohmann::json;

std::string_view name_of(SelectorKind k) noexcept { return k == SelectorKind::kVbs ? "vbs" : "trained"; }

SelectorKind parse_selector_kind(std::string_view s) {
  if (s == "vbs") return SelectorKind::kVbs;
  if (s == "trained") return SelectorKind::kTrained;
  throw ConfigError("unknown selector '" + std::string(s) + "' (expected vbs or trained)");
}

std::string_view name_of(Setting s) noexcept { return s == Setting::kBatch ? "batch" : "stream"; }

Setting parse_setting(std::string_view s) {
  if (s == "batch") return Setting::kBatch;
  if (s == "stream") return Setting::kStream;
  throw ConfigError("unknown setting '" + std::string(s) + "' (expected batch or stream)");
}

void ExperimentConfig::validate() const {
  archive.validate();
  budgets.validate();
  training.validate();
  if (budgets.horizon != archive.horizon) throw ConfigError("budget horizon must match the archive horizon");
  if (budgets.b_as != archive.label_budget) throw ConfigError("b_as must equal the labeling budget");
  if (budgets.precision_target != archive.precision_target) {
    throw ConfigError("precision targets of budgets and labels differ");
  }
  if (splits < 1 || splits % 2 == 0) throw ConfigError("splits must be a positive odd count for median selection");
  if (stream_blocks < 1 || stream_block_size < 1) throw ConfigError("stream blocks must be positive");
  if (experiment_seeds.empty()) throw ConfigError("experiment_seeds must not be empty");
  if (strategies.empty() || selectors.empty() || settings.empty()) {
    throw ConfigError("strategies, selectors and settings must not be empty");
  }
  if (workers < 1) throw ConfigError("workers must be at least 1");
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

BudgetPolicy ExperimentConfig::policy(Strategy s) const {
  BudgetPolicy p = budgets;
  p.strategy = s;
  return p;
}

ExperimentConfig desk_config() {
  ExperimentConfig c;
  for (int f : {1, 2, 3, 5, 6, 8, 12, 13, 14, 17, 20, 21}) c.archive.functions.push_back(FunctionId{f});
  c.training.learning_rate = 1e-3;
  c.training.batch_size = 16;
  return c;
}

namespace {

template <class E>
json names(const std::vector<E>& v) {
  json a = json::array();
  for (auto e : v) a.push_back(std::string(name_of(e)));
  return a;
}

json hashed_part(const ExperimentConfig& c) {
  json functions = json::array();
  for (auto f : c.archive.functions) functions.push_back(f.value);
  return {
      {"schema_version", kConfigSchemaVersion},
      {"suite", {{"functions", functions}, {"instances", c.archive.instances}, {"dimension", c.archive.dimension}}},
      {"runs",
       {{"hardness", c.archive.hardness_runs},
        {"selector", c.archive.selector_runs},
        {"horizon", c.archive.horizon},
        {"label_budget", c.archive.label_budget},
        {"precision_target", c.archive.precision_target}}},
      {"budgets",
       {{"phi_h", c.budgets.phi_h},
        {"phi_as", c.budgets.phi_as},
        {"b_as", c.budgets.b_as},
        {"b_h", c.budgets.b_h},
        {"b_h_curtailed", c.budgets.b_h_curtailed},
        {"curtail", std::string(name_of(c.budgets.curtail))}}},
      {"training",
       {{"model", std::string(name_of(c.model_kind))},
        {"encoding", std::string(name_of(c.encoding))},
        {"epochs", c.training.epochs},
        {"learning_rate", c.training.learning_rate},
        {"batch_size", c.training.batch_size},
        {"hidden", c.training.hidden}}},
      {"splits", c.splits},
      {"streams", {{"blocks", c.stream_blocks}, {"block_size", c.stream_block_size}}},
  };
}

json full(const ExperimentConfig& c) {
  json j = hashed_part(c);
  j["seed"] = c.seed;
  j["experiment_seeds"] = c.experiment_seeds;
  j["strategies"] = names(c.strategies);
  j["selectors"] = names(c.selectors);
  j["settings"] = names(c.settings);
  j["workers"] = c.workers;
  j["output_dir"] = c.output_dir.string();
  return j;
}

void only_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

template <class T>
void read(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

template <class E, class Parse>
void read_names(const json& obj, const char* key, std::vector<E>& out, Parse parse) {
  if (!obj.contains(key)) return;
  std::vector<std::string> raw;
  read(obj, key, raw);
  out.clear();
  for (const auto& s : raw) out.push_back(parse(s));
}

}  // namespace

std::string ExperimentConfig::hash() const { return fnv1a_hex(hashed_part(*this).dump()); }

std::string dump_config(const ExperimentConfig& config) { return full(config).dump(2) + "\n"; }

ExperimentConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  only_keys(j, "config",
            {"schema_version", "suite", "runs", "budgets", "training", "splits", "streams", "seed", "experiment_seeds",
             "strategies", "selectors", "settings", "workers", "output_dir"});
  int version = -1;
  read(j, "schema_version", version);
  if (version != kConfigSchemaVersion) {
    throw ConfigError("unsupported schema_version " + std::to_string(version) + " (expected " +
                      std::to_string(kConfigSchemaVersion) + ")");
  }
  ExperimentConfig c = desk_config();
  if (j.contains("suite")) {
    const json& s = j["suite"];
    only_keys(s, "suite", {"functions", "instances", "dimension"});
    if (s.contains("functions")) {
      std::vector<int> ids;
      read(s, "functions", ids);
      c.archive.functions.clear();
      for (int id : ids) c.archive.functions.push_back(FunctionId{id});
    }
    read(s, "instances", c.archive.instances);
    read(s, "dimension", c.archive.dimension);
  }
  if (j.contains("runs")) {
    const json& r = j["runs"];
    only_keys(r, "runs", {"hardness", "selector", "horizon", "label_budget", "precision_target"});
    read(r, "hardness", c.archive.hardness_runs);
    read(r, "selector", c.archive.selector_runs);
    read(r, "horizon", c.archive.horizon);
    read(r, "label_budget", c.archive.label_budget);
    read(r, "precision_target", c.archive.precision_target);
  }
  c.budgets.horizon = c.archive.horizon;
  c.budgets.precision_target = c.archive.precision_target;
  c.budgets.b_as = c.archive.label_budget;
  if (j.contains("budgets")) {
    const json& b = j["budgets"];
    only_keys(b, "budgets", {"phi_h", "phi_as", "b_as", "b_h", "b_h_curtailed", "curtail"});
    read(b, "phi_h", c.budgets.phi_h);
    read(b, "phi_as", c.budgets.phi_as);
    read(b, "b_as", c.budgets.b_as);
    read(b, "b_h", c.budgets.b_h);
    read(b, "b_h_curtailed", c.budgets.b_h_curtailed);
    std::string mode(name_of(c.budgets.curtail));
    read(b, "curtail", mode);
    c.budgets.curtail = parse_curtail_mode(mode);
  }
  if (j.contains("training")) {
    const json& t = j["training"];
    only_keys(t, "training", {"model", "encoding", "epochs", "learning_rate", "batch_size", "hidden"});
    std::string model(name_of(c.model_kind)), enc(name_of(c.encoding));
    read(t, "model", model);
    read(t, "encoding", enc);
    c.model_kind = parse_model_kind(model);
    c.encoding = parse_input_encoding(enc);
    read(t, "epochs", c.training.epochs);
    read(t, "learning_rate", c.training.learning_rate);
    read(t, "batch_size", c.training.batch_size);
    read(t, "hidden", c.training.hidden);
  }
  read(j, "splits", c.splits);
  if (j.contains("streams")) {
    const json& s = j["streams"];
    only_keys(s, "streams", {"blocks", "block_size"});
    read(s, "blocks", c.stream_blocks);
    read(s, "block_size", c.stream_block_size);
  }
  read(j, "seed", c.seed);
  read(j, "experiment_seeds", c.experiment_seeds);
  read_names(j, "strategies", c.strategies, parse_strategy);
  read_names(j, "selectors", c.selectors, parse_selector_kind);
  read_names(j, "settings", c.settings, parse_setting);
  read(j, "workers", c.workers);
  std::string out = c.output_dir.string();
  read(j, "output_dir", out);
  c.output_dir = out;
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const ArchiveError& e) {
    throw ConfigError(e.what());
  }
  return parse_config(text);
}

}  // namespace easyfilter
