#include "easyfilter/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "easyfilter/errors.hpp"
#include "easyfilter/io.hpp"
#include "easyfilter/seeding.hpp"
#include "easyfilter/text.hpp"

namespace easyfilter {

namespace fs = std::filesystem;

std::string_view name_of(ModelKind k) noexcept { return k == ModelKind::kRecurrent ? "recurrent" : "nearest-neighbor"; }

ModelKind parse_model_kind(std::string_view s) {
  if (s == "recurrent") return ModelKind::kRecurrent;
  if (s == "nearest-neighbor") return ModelKind::kNearestNeighbor;
  throw ConfigError("unknown model kind '" + std::string(s) + "'");
}

std::string_view name_of(InputEncoding e) noexcept { return e == InputEncoding::kShape ? "shape" : "level"; }

InputEncoding parse_input_encoding(std::string_view s) {
  if (s == "shape") return InputEncoding::kShape;
  if (s == "level") return InputEncoding::kLevel;
  throw ConfigError("unknown input encoding '" + std::string(s) + "'");
}

std::vector<double> encode(std::span<const double> values, InputEncoding encoding) {
  if (values.empty()) throw DataError("cannot encode an empty trajectory");
  return encoding == InputEncoding::kShape ? normalize(values) : signed_log(values);
}

void TrainingConfig::validate() const {
  if (epochs <= 0) throw ConfigError("epochs must be positive");
  if (!(learning_rate > 0) || !std::isfinite(learning_rate)) throw ConfigError("learning_rate must be positive");
  if (batch_size <= 0) throw ConfigError("batch_size must be positive");
  if (hidden <= 0) throw ConfigError("hidden size must be positive");
}

void ClassifierSpec::validate() const {
  training.validate();
  if (input_length <= 0) throw ConfigError("input_length must be positive");
  if (num_classes != 2 && num_classes != 3) throw ConfigError("num_classes must be 2 or 3");
}

ClassifierSpec hardness_spec(ModelKind kind, InputEncoding encoding, TrainingConfig training) {
  return {kind, kProbeGenerations, 2, encoding, training};
}

ClassifierSpec selector_spec(ModelKind kind, InputEncoding encoding, TrainingConfig training) {
  return {kind, 3 * kProbeGenerations, 3, encoding, training};
}

ProbingTrajectory hardness_probe(const RunArchive& archive, const SampleKey& key, SolverId sbs) {
  return prefix(archive.at(key, sbs), kProbeGenerations);
}

ConcatenatedTrajectory selector_probe(const RunArchive& archive, const SampleKey& key) {
  return concat(prefix(archive.at(key, SolverId::kCmaEs), kProbeGenerations),
                prefix(archive.at(key, SolverId::kDe), kProbeGenerations),
                prefix(archive.at(key, SolverId::kPso), kProbeGenerations));
}

Dataset hardness_dataset(const RunArchive& archive, std::span<const SampleKey> keys, const HardnessTruth& truth,
                         SolverId sbs, InputEncoding encoding) {
  Dataset d;
  for (const auto& k : keys) {
    auto it = truth.find(instance_of(k));
    if (it == truth.end()) throw IncompleteArchiveError("no hardness label for " + to_string(k));
    d.inputs.push_back(encode(hardness_probe(archive, k, sbs).values, encoding));
    d.labels.push_back(static_cast<int>(it->second));
  }
  return d;
}

Dataset selector_dataset(const RunArchive& archive, std::span<const SampleKey> keys,
                         const std::vector<BestSolverLabel>& labels, InputEncoding encoding) {
  Dataset d;
  for (const auto& k : keys) {
    auto it = std::find_if(labels.begin(), labels.end(), [&](const auto& l) { return l.function == k.function; });
    if (it == labels.end()) throw IncompleteArchiveError("no best-solver label for function " + std::to_string(k.function.value));
    d.inputs.push_back(encode(selector_probe(archive, k).values(), encoding));
    d.labels.push_back(index_of(it->label));
  }
  return d;
}

TrainedModel::TrainedModel(ClassifierSpec spec, int split_id) : spec_(spec), split_id_(split_id) {}

std::vector<double> TrainedModel::probabilities(std::span<const double> input) const {
  if (static_cast<int>(input.size()) != spec_.input_length) {
    throw ContractError("model expects inputs of length " + std::to_string(spec_.input_length) + ", got " +
                        std::to_string(input.size()));
  }
  std::vector<double> p(static_cast<std::size_t>(spec_.num_classes), 0.0);
  std::vector<double> x(input.begin(), input.end());
  for (double& v : x) v = (v - input_shift) / input_scale;
  if (network) {
    const std::vector<double>& seq = x;
    const Eigen::MatrixXd probs = network->forward(to_steps({&seq}, 1));
    for (int c = 0; c < spec_.num_classes; ++c) p[static_cast<std::size_t>(c)] = probs(c, 0);
    return p;
  }
  if (exemplars.size() == 0) throw ContractError("model has neither a network nor exemplars");
  double best = std::numeric_limits<double>::infinity();
  int label = 0;
  for (std::size_t i = 0; i < exemplars.size(); ++i) {
    double d = 0.0;
    for (std::size_t j = 0; j < input.size(); ++j) {
      const double diff = exemplars.inputs[i][j] - x[j];
      d += diff * diff;
    }
    if (d < best) {
      best = d;
      label = exemplars.labels[i];
    }
  }
  p[static_cast<std::size_t>(label)] = 1.0;
  return p;
}

int TrainedModel::predict(std::span<const double> input) const {
  const auto p = probabilities(input);
  return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

std::vector<int> TrainedModel::predict_all(const std::vector<std::vector<double>>& inputs) const {
  std::vector<int> out;
  out.reserve(inputs.size());
  for (const auto& x : inputs) out.push_back(predict(x));
  return out;
}

bool TrainedModel::operator==(const TrainedModel& other) const {
  const auto same_spec = spec_.kind == other.spec_.kind && spec_.input_length == other.spec_.input_length &&
                         spec_.num_classes == other.spec_.num_classes &&
                         spec_.encoding == other.spec_.encoding && input_shift == other.input_shift &&
                         input_scale == other.input_scale;
  if (!same_spec || split_id_ != other.split_id_ || network.has_value() != other.network.has_value()) return false;
  if (network && network->parameters() != other.network->parameters()) return false;
  return exemplars.inputs == other.exemplars.inputs && exemplars.labels == other.exemplars.labels;
}

TrainedModel train(const ClassifierSpec& spec, const Dataset& data, int split_id) {
  spec.validate();
  if (data.size() == 0) throw ConfigError("empty training set");
  if (data.inputs.size() != data.labels.size()) throw ConfigError("inputs and labels differ in count");
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (static_cast<int>(data.inputs[i].size()) != spec.input_length) throw ConfigError("training input of wrong length");
    if (data.labels[i] < 0 || data.labels[i] >= spec.num_classes) throw ConfigError("training label out of range");
  }
  TrainedModel model(spec, split_id);
  if (spec.encoding == InputEncoding::kLevel) {
    double sum = 0.0, sq = 0.0, n = 0.0;
    for (const auto& x : data.inputs)
      for (double v : x) {
        sum += v;
        sq += v * v;
        n += 1.0;
      }
    const double mean = sum / n;
    const double sd = std::sqrt(std::max(0.0, sq / n - mean * mean));
    model.input_shift = mean;
    model.input_scale = sd > 1e-12 ? sd : 1.0;
  }
  Dataset scaled = data;
  for (auto& x : scaled.inputs)
    for (double& v : x) v = (v - model.input_shift) / model.input_scale;
  if (spec.kind == ModelKind::kNearestNeighbor) {
    model.exemplars = std::move(scaled);
    return model;
  }

  const auto& tc = spec.training;
  Gru net(1, tc.hidden, spec.num_classes);
  net.initialize(derive_seed({tc.seed, 0x6e7, static_cast<std::uint64_t>(split_id)}));
  std::mt19937_64 rng(derive_seed({tc.seed, 0xba7c, static_cast<std::uint64_t>(split_id)}));
  Adam adam;
  adam.learning_rate = tc.learning_rate;
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Eigen::VectorXd grad;
  std::vector<const std::vector<double>*> batch;
  std::vector<int> labels;
  for (int epoch = 0; epoch < tc.epochs; ++epoch) {
    portable_shuffle(std::span(order), rng);
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(tc.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(tc.batch_size));
      batch.clear();
      labels.clear();
      for (std::size_t i = start; i < end; ++i) {
        batch.push_back(&scaled.inputs[order[i]]);
        labels.push_back(scaled.labels[order[i]]);
      }
      const double loss = net.loss(to_steps(batch, 1), labels, &grad);
      if (!std::isfinite(loss) || !grad.allFinite()) {
        throw TrainingError("loss diverged in epoch " + std::to_string(epoch + 1));
      }
      adam.step(net.parameters(), grad);
      if (!net.parameters().allFinite()) {
        throw TrainingError("parameters overflowed in epoch " + std::to_string(epoch + 1));
      }
    }
  }
  model.network = std::move(net);
  return model;
}

Hardness predict_hardness(const TrainedModel& model, const ProbingTrajectory& traj) {
  if (model.spec().num_classes != 2) throw ContractError("not a hardness model");
  return static_cast<Hardness>(model.predict(encode(traj.values, model.spec().encoding)));
}

SolverId predict_solver(const TrainedModel& model, const ConcatenatedTrajectory& traj) {
  if (model.spec().num_classes != 3) throw ContractError("not a selector model");
  return kPortfolio[static_cast<std::size_t>(model.predict(encode(traj.values(), model.spec().encoding)))];
}

long long ConfusionMatrix::total() const { return std::accumulate(counts.begin(), counts.end(), 0LL); }

double ConfusionMatrix::accuracy() const {
  long long diag = 0;
  for (int c = 0; c < classes; ++c) diag += at(c, c);
  const long long n = total();
  return n == 0 ? std::numeric_limits<double>::quiet_NaN() : static_cast<double>(diag) / static_cast<double>(n);
}

double ConfusionMatrix::recall(int cls) const {
  long long row = 0;
  for (int c = 0; c < classes; ++c) row += at(cls, c);
  return row == 0 ? std::numeric_limits<double>::quiet_NaN()
                  : static_cast<double>(at(cls, cls)) / static_cast<double>(row);
}

double ConfusionMatrix::balanced_accuracy() const {
  double sum = 0.0;
  int present = 0;
  for (int c = 0; c < classes; ++c) {
    const double r = recall(c);
    if (!std::isnan(r)) {
      sum += r;
      ++present;
    }
  }
  return present == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / present;
}

ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted, int classes) {
  if (truth.size() != predicted.size()) throw ContractError("truth and predictions differ in length");
  ConfusionMatrix m(classes);
  for (std::size_t i = 0; i < truth.size(); ++i) ++m.at(truth[i], predicted[i]);
  return m;
}

Evaluation evaluate_model(const TrainedModel& model, const Dataset& test) {
  const auto pred = model.predict_all(test.inputs);
  Evaluation e{confusion(test.labels, pred, model.spec().num_classes)};
  e.accuracy = e.matrix.accuracy();
  e.balanced_accuracy = e.matrix.balanced_accuracy();
  return e;
}

std::size_t select_median_model(std::span<const double> accuracies) {
  if (accuracies.empty() || accuracies.size() % 2 == 0) {
    throw ConfigError("median model selection needs an odd number of models");
  }
  std::vector<double> sorted(accuracies.begin(), accuracies.end());
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];
  return static_cast<std::size_t>(std::find(accuracies.begin(), accuracies.end(), median) - accuracies.begin());
}

void save_model(const fs::path& path, const TrainedModel& model, const std::string& config_hash) {
  const auto& s = model.spec();
  std::ostringstream out;
  out << "#easyfilter\tmodel\tv1\tconfig=" << config_hash << "\n"
      << "kind\t" << name_of(s.kind) << "\n"
      << "input_length\t" << s.input_length << "\n"
      << "num_classes\t" << s.num_classes << "\n"
      << "split\t" << model.split_id() << "\n"
      << "encoding\t" << name_of(s.encoding) << "\n"
      << "input_shift\t" << format_double(model.input_shift) << "\n"
      << "input_scale\t" << format_double(model.input_scale) << "\n";
  if (model.network) {
    const auto& theta = model.network->parameters();
    out << "hidden\t" << model.network->hidden() << "\n" << "parameters\t" << theta.size() << "\n";
    for (Eigen::Index i = 0; i < theta.size(); ++i) out << format_double(theta(i)) << "\n";
  } else {
    out << "exemplars\t" << model.exemplars.size() << "\n";
    for (std::size_t i = 0; i < model.exemplars.size(); ++i) {
      out << model.exemplars.labels[i];
      for (double v : model.exemplars.inputs[i]) out << "\t" << format_double(v);
      out << "\n";
    }
  }
  write_file(path, out.str());
}

TrainedModel load_model(const fs::path& path, const std::string& config_hash) {
  std::istringstream in(read_file(path));
  std::string line;
  auto next_fields = [&](std::string_view key) {
    if (!std::getline(in, line)) throw DataError(path.string() + ": truncated model file");
    auto f = split(line, '\t');
    if (f.size() != 2 || f[0] != key) throw DataError(path.string() + ": expected '" + std::string(key) + "'");
    return std::string(f[1]);
  };
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty model file");
  const auto head = split(line, '\t');
  if (head.size() != 4 || head[0] != "#easyfilter" || head[1] != "model" || head[2] != "v1") {
    throw DataError(path.string() + ": not a v1 model file");
  }
  if (!config_hash.empty() && head[3] != "config=" + config_hash) {
    throw DataError(path.string() + " was trained under a different configuration");
  }
  ClassifierSpec spec;
  spec.kind = parse_model_kind(next_fields("kind"));
  spec.input_length = static_cast<int>(parse_int(next_fields("input_length")));
  spec.num_classes = static_cast<int>(parse_int(next_fields("num_classes")));
  const int split_id = static_cast<int>(parse_int(next_fields("split")));
  spec.encoding = parse_input_encoding(next_fields("encoding"));
  TrainedModel model(spec, split_id);
  model.input_shift = parse_double(next_fields("input_shift"));
  model.input_scale = parse_double(next_fields("input_scale"));
  if (spec.kind == ModelKind::kRecurrent) {
    const int hidden = static_cast<int>(parse_int(next_fields("hidden")));
    const auto n = parse_int(next_fields("parameters"));
    Gru net(1, hidden, spec.num_classes);
    if (n != net.parameters().size()) throw DataError(path.string() + ": parameter count does not match the shape");
    for (Eigen::Index i = 0; i < net.parameters().size(); ++i) {
      if (!std::getline(in, line)) throw DataError(path.string() + ": truncated parameters");
      net.parameters()(i) = parse_double(line);
    }
    model.network = std::move(net);
  } else {
    const auto n = parse_int(next_fields("exemplars"));
    for (long long i = 0; i < n; ++i) {
      if (!std::getline(in, line)) throw DataError(path.string() + ": truncated exemplars");
      const auto f = split(line, '\t');
      if (static_cast<int>(f.size()) != spec.input_length + 1) throw DataError(path.string() + ": bad exemplar row");
      model.exemplars.labels.push_back(static_cast<int>(parse_int(f[0])));
      std::vector<double> x;
      for (std::size_t j = 1; j < f.size(); ++j) x.push_back(parse_double(f[j]));
      model.exemplars.inputs.push_back(std::move(x));
    }
  }
  return model;
}

}  // namespace easyfilter
