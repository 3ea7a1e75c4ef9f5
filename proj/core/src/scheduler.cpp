#include "easyfilter/scheduler.hpp"

#include <algorithm>
#include <random>

#include "easyfilter/errors.hpp"
#include "easyfilter/io.hpp"
#include "easyfilter/seeding.hpp"
#include "easyfilter/text.hpp"

namespace easyfilter {

BatchResult run_batch(const Pipeline& pipeline, std::span<const SampleKey> instances) {
  BatchResult r;
  r.outcomes.resize(instances.size());
  std::vector<Assessment> hard;
  std::vector<std::size_t> hard_pos;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    Assessment a = pipeline.assess(instances[i]);
    if (a.verdict == Hardness::kEasy) {
      r.outcomes[i] = pipeline.finish(a, r.ledger);
      r.ledger.check();
      ++r.plan.easy;
    } else {
      hard.push_back(std::move(a));
      hard_pos.push_back(i);
    }
  }
  r.plan.hard = static_cast<int>(hard.size());
  r.plan.saved = r.ledger.pool();
  r.plan.extension = hard.empty() ? 0 : static_cast<int>(r.plan.saved / r.plan.hard);
  const int capped = std::min(r.plan.extension, pipeline.policy().max_grant());
  for (std::size_t j = 0; j < hard.size(); ++j) {
    const int grant = whole_generations(capped, hard[j].chosen);
    r.outcomes[hard_pos[j]] = pipeline.finish(hard[j], r.ledger, grant);
    r.ledger.check();
    r.plan.granted += grant;
  }
  r.plan.unspent = r.plan.saved - r.plan.granted;
  return r;
}

StreamResult run_stream(const Pipeline& pipeline, std::span<const SampleKey> stream) {
  StreamResult r;
  r.outcomes.reserve(stream.size());
  for (const auto& key : stream) {
    const Assessment a = pipeline.assess(key);
    int grant = 0;
    if (a.verdict == Hardness::kHard) {
      const long long available = std::min<long long>(r.ledger.pool(), pipeline.policy().max_grant());
      grant = whole_generations(static_cast<int>(available), a.chosen);
    }
    r.outcomes.push_back(pipeline.finish(a, r.ledger, grant));
    r.ledger.check();
  }
  r.leftover = r.ledger.pool();
  return r;
}

std::vector<double> cumulative_gain(std::span<const PipelineOutcome> outcomes,
                                    std::span<const PipelineOutcome> baseline) {
  if (outcomes.size() != baseline.size()) throw AuditError("traces differ in length");
  std::vector<double> errors;
  errors.reserve(baseline.size());
  for (std::size_t i = 0; i < baseline.size(); ++i) {
    if (outcomes[i].key != baseline[i].key) {
      throw AuditError("traces diverge at position " + std::to_string(i) + ": " + to_string(outcomes[i].key) +
                       " vs " + to_string(baseline[i].key));
    }
    errors.push_back(baseline[i].final_error);
  }
  return cumulative_gain(outcomes, errors);
}

std::vector<double> cumulative_gain(std::span<const PipelineOutcome> outcomes, std::span<const double> baseline_errors) {
  if (outcomes.size() != baseline_errors.size()) throw AuditError("traces differ in length");
  std::vector<double> out;
  out.reserve(outcomes.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    acc += baseline_errors[i] - outcomes[i].final_error;
    out.push_back(acc);
  }
  return out;
}

StreamSpec bootstrap_stream(std::string name, std::span<const SampleKey> pool, int blocks, int block_size,
                            std::uint64_t seed) {
  if (pool.empty()) throw ConfigError("cannot bootstrap from an empty pool");
  if (blocks <= 0 || block_size <= 0) throw ConfigError("bootstrap needs positive block counts");
  StreamSpec s;
  s.name = std::move(name);
  std::mt19937_64 rng(seed);
  for (int b = 0; b < blocks; ++b)
    for (int i = 0; i < block_size; ++i) s.items.push_back(pool[uniform_below(rng, pool.size())]);
  return s;
}

void write_stream_spec(const std::filesystem::path& path, const StreamSpec& spec, const std::string& config_hash) {
  std::string out = table_header("stream", config_hash) + "position\tfunction\tinstance\trun\n";
  for (std::size_t i = 0; i < spec.items.size(); ++i) {
    const auto& k = spec.items[i];
    out += std::to_string(i + 1) + "\t" + std::to_string(k.function.value) + "\t" + std::to_string(k.instance) + "\t" +
           std::to_string(k.run) + "\n";
  }
  write_file(path, out);
}

StreamSpec read_stream_spec(const std::filesystem::path& path, const std::string& config_hash) {
  StreamSpec s;
  s.name = path.stem().string();
  for (const auto& row : read_table(path, "stream", config_hash)) {
    if (row.size() != 4) throw DataError(path.string() + ": stream rows have 4 fields");
    if (parse_int(row[0]) != static_cast<long long>(s.items.size()) + 1) {
      throw DataError(path.string() + ": stream positions must be consecutive");
    }
    s.items.push_back({FunctionId{static_cast<int>(parse_int(row[1]))}, static_cast<int>(parse_int(row[2])),
                       static_cast<int>(parse_int(row[3]))});
  }
  return s;
}

}  // namespace easyfilter
