#include "easyfilter/archive.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "easyfilter/errors.hpp"
#include "easyfilter/io.hpp"
#include "easyfilter/seeding.hpp"
#include "easyfilter/text.hpp"

namespace easyfilter {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kRunFormat = "easyfilter-run";

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

void ArchiveSpec::validate() const {
  if (functions.empty()) throw ConfigError("suite selects no functions");
  std::set<FunctionId> seen;
  for (auto f : functions) {
    if (!is_registered(f)) throw ConfigError("function " + std::to_string(f.value) + " is not registered");
    if (!seen.insert(f).second) throw ConfigError("function " + std::to_string(f.value) + " listed twice");
  }
  if (instances < 1) throw ConfigError("instances must be positive");
  if (dimension < 2) throw ConfigError("dimension must be at least 2");
  if (hardness_runs < 10) throw ConfigError("hardness_runs must be at least 10");
  if (selector_runs < 1 || selector_runs > hardness_runs) {
    throw ConfigError("selector_runs must be in [1, hardness_runs]");
  }
  if (label_budget <= 0 || horizon < label_budget) throw ConfigError("horizon must cover the label budget");
  for (auto s : kPortfolio) {
    if (horizon % population_of(s) != 0) {
      throw ConfigError("horizon must be a whole number of generations of every solver");
    }
  }
  if (!(precision_target > 0)) throw ConfigError("precision_target must be positive");
}

std::string ArchiveSpec::run_hash() const {
  return fnv1a_hex("runs v1 dimension=" + std::to_string(dimension) + " horizon=" + std::to_string(horizon));
}

std::uint64_t run_seed(const RunKey& key) {
  return derive_seed({static_cast<std::uint64_t>(key.sample.function.value),
                      static_cast<std::uint64_t>(key.sample.instance), static_cast<std::uint64_t>(index_of(key.solver)),
                      static_cast<std::uint64_t>(key.sample.run)});
}

std::string to_string(const SampleKey& key) {
  return "f" + std::to_string(key.function.value) + "-i" + std::to_string(key.instance) + "-r" +
         std::to_string(key.run);
}

std::vector<SampleKey> hardness_samples(const ArchiveSpec& spec) {
  std::vector<SampleKey> out;
  for (auto f : spec.functions)
    for (int i = 1; i <= spec.instances; ++i)
      for (int r = 1; r <= spec.hardness_runs; ++r) out.push_back({f, i, r});
  return out;
}

std::vector<SampleKey> selector_samples(const ArchiveSpec& spec) {
  std::vector<SampleKey> out;
  for (auto f : spec.functions)
    for (int i = 1; i <= spec.instances; ++i)
      for (int r = 1; r <= spec.selector_runs; ++r) out.push_back({f, i, r});
  return out;
}

std::vector<RunKey> planned_runs(const ArchiveSpec& spec) {
  std::vector<RunKey> out;
  for (const auto& s : hardness_samples(spec))
    for (auto solver : kPortfolio) out.push_back({s, solver});
  return out;
}

DatasetManifest manifest_of(const ArchiveSpec& spec) {
  const long long per = static_cast<long long>(spec.functions.size()) * spec.instances;
  return {per * spec.hardness_runs, per * spec.selector_runs, per * spec.hardness_runs * 3};
}

void RunArchive::insert(const RunKey& key, RunRecord record) { runs_.insert_or_assign(key, std::move(record)); }

const RunRecord& RunArchive::at(const RunKey& key) const {
  auto it = runs_.find(key);
  if (it == runs_.end()) {
    throw IncompleteArchiveError("missing " + std::string(name_of(key.solver)) + " run " + to_string(key.sample));
  }
  return it->second;
}

std::string serialize_run(const RunKey& key, const RunRecord& record, const std::string& run_hash) {
  json head = {{"format", kRunFormat}, {"version", 1}, {"runs", run_hash}};
  json body = {{"function", key.sample.function.value},
               {"instance", key.sample.instance},
               {"run", key.sample.run},
               {"solver", name_of(key.solver)},
               {"dimension", record.dimension},
               {"population", record.config.population},
               {"seed", record.config.seed},
               {"max_evaluations", record.config.max_evaluations},
               {"evaluations_used", record.evaluations_used},
               {"best_so_far", record.best_so_far}};
  return head.dump() + "\n" + body.dump() + "\n";
}

std::pair<RunKey, RunRecord> parse_run(const std::string& text, const std::string& expected_hash) {
  std::istringstream in(text);
  std::string l1, l2;
  if (!std::getline(in, l1) || !std::getline(in, l2)) throw DataError("run file needs a header and a record line");
  try {
    const json head = json::parse(l1);
    if (head.at("format") != kRunFormat || head.at("version") != 1) throw DataError("unknown run file format");
    if (!expected_hash.empty() && head.at("runs").get<std::string>() != expected_hash) {
      throw ArchiveError("run file was generated under a different configuration");
    }
    const json b = json::parse(l2);
    RunKey key;
    key.sample = {FunctionId{b.at("function").get<int>()}, b.at("instance").get<int>(), b.at("run").get<int>()};
    key.solver = parse_solver(b.at("solver").get<std::string>());
    RunRecord rec;
    rec.function = key.sample.function;
    rec.instance_seed = key.sample.instance;
    rec.dimension = b.at("dimension").get<int>();
    rec.config.solver = key.solver;
    rec.config.population = b.at("population").get<int>();
    rec.config.seed = b.at("seed").get<std::uint64_t>();
    rec.config.max_evaluations = b.at("max_evaluations").get<int>();
    rec.evaluations_used = b.at("evaluations_used").get<int>();
    rec.best_so_far = b.at("best_so_far").get<std::vector<double>>();
    if (rec.evaluations_used != rec.generations() * rec.config.population) {
      throw DataError("evaluations_used disagrees with the record length");
    }
    return {key, std::move(rec)};
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed run file: ") + e.what());
  }
}

RunStore::RunStore(fs::path root, std::string run_hash) : root_(std::move(root)), hash_(std::move(run_hash)) {}

fs::path RunStore::path_of(const RunKey& key) const {
  return root_ / "runs" / std::string(name_of(key.solver)) /
         (std::to_string(key.sample.function.value) + "-" + std::to_string(key.sample.instance) + "-" +
          std::to_string(key.sample.run) + ".jsonl");
}

bool RunStore::contains(const RunKey& key) const {
  const auto p = path_of(key);
  if (!fs::exists(p)) return false;
  get(key);
  return true;
}

void RunStore::put(const RunKey& key, const RunRecord& record) const {
  write_file(path_of(key), serialize_run(key, record, hash_));
}

RunRecord RunStore::get(const RunKey& key) const {
  const auto p = path_of(key);
  if (!fs::exists(p)) {
    throw IncompleteArchiveError("missing run file " + p.string());
  }
  auto [k, rec] = parse_run(read_file(p), hash_);
  if (k != key) throw ArchiveError(p.string() + " holds a different run");
  return rec;
}

std::size_t generate_runs(const ArchiveSpec& spec, const RunStore& store, int workers, const ProgressFn& progress) {
  spec.validate();
  std::vector<RunKey> todo;
  for (const auto& k : planned_runs(spec)) {
    if (!store.contains(k)) todo.push_back(k);
  }
  std::map<InstanceRef, ProblemInstance> instances;
  for (const auto& k : todo) {
    const InstanceRef ref = instance_of(k.sample);
    if (!instances.contains(ref)) instances.emplace(ref, generate_instance(ref.function, ref.instance, spec.dimension));
  }

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex mu;
  std::exception_ptr failure;
  auto work = [&] {
    for (std::size_t i = next++; i < todo.size(); i = next++) {
      try {
        const RunKey& k = todo[i];
        const auto& inst = instances.at(instance_of(k.sample));
        store.put(k, run(inst, SolverConfig::make(k.solver, run_seed(k), spec.horizon)));
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        next = todo.size();
        return;
      }
      const std::size_t d = ++done;
      if (progress) {
        std::lock_guard lock(mu);
        progress(d, todo.size());
      }
    }
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(todo.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return todo.size();
}

RunArchive load_archive(const ArchiveSpec& spec, const RunStore& store) {
  spec.validate();
  RunArchive archive;
  for (const auto& k : planned_runs(spec)) {
    RunRecord rec = store.get(k);
    if (rec.evaluations_used < spec.horizon) {
      throw IncompleteArchiveError("run " + to_string(k.sample) + " stops before the horizon");
    }
    archive.insert(k, std::move(rec));
  }
  return archive;
}

std::string_view name_of(Hardness h) noexcept { return h == Hardness::kEasy ? "easy" : "hard"; }

Hardness parse_hardness(std::string_view s) {
  if (s == "easy") return Hardness::kEasy;
  if (s == "hard") return Hardness::kHard;
  throw DataError("unknown hardness label '" + std::string(s) + "'");
}

std::vector<BestSolverLabel> label_best_solver(const ArchiveSpec& spec, const RunArchive& archive) {
  std::vector<BestSolverLabel> out;
  for (auto f : spec.functions) {
    BestSolverLabel label;
    label.function = f;
    for (auto s : kPortfolio) {
      std::vector<double> errs;
      for (int i = 1; i <= spec.instances; ++i)
        for (int r = 1; r <= spec.selector_runs; ++r) errs.push_back(best_at(archive.at({{f, i, r}, s}), spec.label_budget));
      label.medians[static_cast<std::size_t>(index_of(s))] = median_of(std::move(errs));
    }
    const auto best = std::min_element(label.medians.begin(), label.medians.end());
    label.label = kPortfolio[static_cast<std::size_t>(best - label.medians.begin())];
    out.push_back(label);
  }
  return out;
}

SolverId single_best_solver(const std::vector<BestSolverLabel>& labels) {
  std::array<int, 3> wins{};
  for (const auto& l : labels) ++wins[static_cast<std::size_t>(index_of(l.label))];
  return kPortfolio[static_cast<std::size_t>(std::max_element(wins.begin(), wins.end()) - wins.begin())];
}

std::vector<HardnessLabel> label_hardness(const ArchiveSpec& spec, const RunArchive& archive, SolverId sbs) {
  std::vector<HardnessLabel> out;
  for (auto f : spec.functions) {
    for (int i = 1; i <= spec.instances; ++i) {
      bool easy = true;
      for (int r = 1; r <= spec.hardness_runs; ++r) {
        if (!(best_at(archive.at({{f, i, r}, sbs}), spec.label_budget) < spec.precision_target)) easy = false;
      }
      out.push_back({{f, i}, easy ? Hardness::kEasy : Hardness::kHard});
    }
  }
  return out;
}

HardnessTruth to_map(const std::vector<HardnessLabel>& labels) {
  HardnessTruth m;
  for (const auto& l : labels) m.emplace(l.instance, l.label);
  return m;
}

void write_hardness_labels(const fs::path& path, const std::vector<HardnessLabel>& labels,
                           const std::string& config_hash) {
  std::string out = table_header("hardness", config_hash) + "function\tinstance\tlabel\n";
  for (const auto& l : labels) {
    out += std::to_string(l.instance.function.value) + "\t" + std::to_string(l.instance.instance) + "\t" +
           std::string(name_of(l.label)) + "\n";
  }
  write_file(path, out);
}

std::vector<HardnessLabel> read_hardness_labels(const fs::path& path, const std::string& config_hash) {
  std::vector<HardnessLabel> out;
  for (const auto& row : read_table(path, "hardness", config_hash)) {
    if (row.size() != 3) throw DataError(path.string() + ": hardness rows have 3 fields");
    out.push_back({{FunctionId{static_cast<int>(parse_int(row[0]))}, static_cast<int>(parse_int(row[1]))},
                   parse_hardness(row[2])});
  }
  return out;
}

void write_best_solver_labels(const fs::path& path, const std::vector<BestSolverLabel>& labels,
                              const std::string& config_hash) {
  std::string out = table_header("best_solver", config_hash) + "function\tlabel\tmedian_cmaes\tmedian_de\tmedian_pso\n";
  for (const auto& l : labels) {
    out += std::to_string(l.function.value) + "\t" + std::string(name_of(l.label));
    for (double m : l.medians) out += "\t" + format_double(m);
    out += "\n";
  }
  write_file(path, out);
}

std::vector<BestSolverLabel> read_best_solver_labels(const fs::path& path, const std::string& config_hash) {
  std::vector<BestSolverLabel> out;
  for (const auto& row : read_table(path, "best_solver", config_hash)) {
    if (row.size() != 5) throw DataError(path.string() + ": best-solver rows have 5 fields");
    BestSolverLabel l;
    l.function = FunctionId{static_cast<int>(parse_int(row[0]))};
    l.label = parse_solver(row[1]);
    for (std::size_t s = 0; s < 3; ++s) l.medians[s] = parse_double(row[2 + s]);
    out.push_back(l);
  }
  return out;
}

std::vector<Split> make_splits(const ArchiveSpec& spec, std::uint64_t seed, int k) {
  if (k < 1) throw ConfigError("need at least one split");
  const auto hard_all = hardness_samples(spec);
  const auto sel_all = selector_samples(spec);
  const std::size_t sel_test = (sel_all.size() + 2) / 5;
  const std::size_t hard_test = (hard_all.size() + 2) / 5;
  if (sel_test == 0 || sel_test == sel_all.size() || hard_test == hard_all.size()) {
    throw ConfigError("dataset too small to split 80/20");
  }
  std::vector<Split> out;
  for (int id = 1; id <= k; ++id) {
    Split s;
    s.id = id;
    s.seed = derive_seed({seed, 0x5b117, static_cast<std::uint64_t>(id)});
    std::mt19937_64 rng(s.seed);

    std::vector<SampleKey> sel = sel_all;
    portable_shuffle(std::span(sel), rng);
    s.selector_test.assign(sel.begin(), sel.begin() + static_cast<std::ptrdiff_t>(sel_test));
    s.selector_train.assign(sel.begin() + static_cast<std::ptrdiff_t>(sel_test), sel.end());

    const std::set<SampleKey> in_sel_test(s.selector_test.begin(), s.selector_test.end());
    std::vector<SampleKey> rest;
    for (const auto& h : hard_all) {
      if (!in_sel_test.contains(h)) rest.push_back(h);
    }
    portable_shuffle(std::span(rest), rng);
    const std::size_t extra = hard_test - std::min(hard_test, sel_test);
    s.hardness_test = s.selector_test;
    s.hardness_test.insert(s.hardness_test.end(), rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(extra));
    portable_shuffle(std::span(s.hardness_test), rng);
    s.hardness_train.assign(rest.begin() + static_cast<std::ptrdiff_t>(extra), rest.end());
    std::sort(s.hardness_train.begin(), s.hardness_train.end());
    std::sort(s.selector_train.begin(), s.selector_train.end());
    out.push_back(std::move(s));
  }
  return out;
}

void write_split(const fs::path& path, const Split& split, const std::string& config_hash) {
  std::string out = table_header("split", config_hash) + "role\tfunction\tinstance\trun\n";
  auto emit = [&](std::string_view role, const std::vector<SampleKey>& keys) {
    for (const auto& k : keys) {
      out += std::string(role) + "\t" + std::to_string(k.function.value) + "\t" + std::to_string(k.instance) + "\t" +
             std::to_string(k.run) + "\n";
    }
  };
  emit("hardness_train", split.hardness_train);
  emit("hardness_test", split.hardness_test);
  emit("selector_train", split.selector_train);
  emit("selector_test", split.selector_test);
  write_file(path, out);
}

Split read_split(const fs::path& path, int id, const std::string& config_hash) {
  Split s;
  s.id = id;
  for (const auto& row : read_table(path, "split", config_hash)) {
    if (row.size() != 4) throw DataError(path.string() + ": split rows have 4 fields");
    const SampleKey k{FunctionId{static_cast<int>(parse_int(row[1]))}, static_cast<int>(parse_int(row[2])),
                      static_cast<int>(parse_int(row[3]))};
    if (row[0] == "hardness_train") s.hardness_train.push_back(k);
    else if (row[0] == "hardness_test") s.hardness_test.push_back(k);
    else if (row[0] == "selector_train") s.selector_train.push_back(k);
    else if (row[0] == "selector_test") s.selector_test.push_back(k);
    else throw DataError(path.string() + ": unknown role '" + row[0] + "'");
  }
  return s;
}

}  // namespace easyfilter
