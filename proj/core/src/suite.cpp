#include "easyfilter/suite.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "easyfilter/errors.hpp"
#include "easyfilter/seeding.hpp"
#include "easyfilter/text.hpp"

namespace easyfilter {

namespace {

const std::vector<FunctionInfo> kRegistry = {
    {{1}, "sphere", true, false},
    {{2}, "ellipsoid-separable", true, false},
    {{3}, "rastrigin-separable", true, true},
    {{4}, "bueche-rastrigin", true, true},
    {{5}, "linear-slope", true, false},
    {{6}, "attractive-sector", false, false},
    {{7}, "step-ellipsoid", false, false},
    {{8}, "rosenbrock", false, false},
    {{9}, "rosenbrock-rotated", false, false},
    {{10}, "ellipsoid", false, false},
    {{11}, "discus", false, false},
    {{12}, "bent-cigar", false, false},
    {{13}, "sharp-ridge", false, false},
    {{14}, "different-powers", false, false},
    {{15}, "rastrigin", false, true},
    {{16}, "weierstrass", false, true},
    {{17}, "schaffers-f7", false, true},
    {{18}, "schaffers-f7-ill", false, true},
    {{19}, "griewank-rosenbrock", false, true},
    {{20}, "schwefel", false, true},
    {{21}, "gallagher-101", false, true},
    {{22}, "gallagher-21", false, true},
    {{23}, "katsuura", false, true},
    {{24}, "lunacek-bi-rastrigin", false, true},
};

Eigen::MatrixXd random_orthogonal(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(d, d);
  for (int c = 0; c < d; ++c)
    for (int r = 0; r < d; ++r) g(r, c) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Sign fix makes the draw Haar-distributed.
  for (int c = 0; c < d; ++c) {
    if (r(c, c) < 0) q.col(c) *= -1.0;
  }
  return q;
}

bool uses_rotation(int id) {
  return id >= 6 && id != 8 && id != 20;
}

bool uses_second_rotation(int id) {
  switch (id) {
    case 6: case 7: case 13: case 15: case 16: case 17: case 18: case 23: case 24:
      return true;
    default:
      return false;
  }
}

void make_peaks(ProblemInstance& inst, int id, int d, std::mt19937_64& rng,
                Eigen::MatrixXd& centers, Eigen::MatrixXd& scales, Eigen::VectorXd& weights) {
  const int peaks = id == 21 ? 101 : 21;
  const double y_range = id == 21 ? 5.0 : 4.9;
  const double alpha_first = id == 21 ? 1000.0 : 1.0e6;
  std::uniform_real_distribution<double> unif(-y_range, y_range);

  std::vector<double> alphas(static_cast<std::size_t>(peaks - 1));
  for (int j = 0; j < peaks - 1; ++j) {
    alphas[static_cast<std::size_t>(j)] = std::pow(1000.0, 2.0 * j / (peaks - 2));
  }
  std::shuffle(alphas.begin(), alphas.end(), rng);

  weights.resize(peaks);
  centers.resize(d, peaks);
  scales.resize(d, peaks);
  std::vector<int> perm(static_cast<std::size_t>(d));
  const Eigen::MatrixXd& rot = inst.rotation();
  for (int i = 0; i < peaks; ++i) {
    const double alpha = i == 0 ? alpha_first : alphas[static_cast<std::size_t>(i - 1)];
    weights(i) = i == 0 ? 10.0 : 1.1 + 8.0 * (i - 1) / (peaks - 2);
    Eigen::VectorXd y(d);
    if (i == 0) {
      y = inst.x_opt();
    } else {
      for (int k = 0; k < d; ++k) y(k) = unif(rng);
    }
    centers.col(i) = rot * y;
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int k = 0; k < d; ++k) {
      const double exponent = 0.5 * perm[static_cast<std::size_t>(k)] / (d - 1);
      scales(k, i) = std::pow(alpha, exponent) / std::pow(alpha, 0.25);
    }
  }
}

}  // namespace

bool SearchDomain::contains(std::span<const double> x) const noexcept {
  return std::all_of(x.begin(), x.end(), [this](double v) { return v >= lower && v <= upper; });
}

const std::vector<FunctionInfo>& function_registry() { return kRegistry; }

std::vector<FunctionId> registered_functions() {
  std::vector<FunctionId> ids;
  ids.reserve(kRegistry.size());
  for (const auto& info : kRegistry) ids.push_back(info.id);
  return ids;
}

bool is_registered(FunctionId id) noexcept {
  return id.value >= 1 && id.value <= static_cast<int>(kRegistry.size());
}

const FunctionInfo& function_info(FunctionId id) {
  if (!is_registered(id)) {
    throw RegistrationError("unknown function id " + std::to_string(id.value));
  }
  return kRegistry[static_cast<std::size_t>(id.value - 1)];
}

ProblemInstance generate_instance(FunctionId function, int instance_seed, int d) {
  function_info(function);
  if (d < 2) throw ContractError("dimension must be at least 2");
  if (instance_seed < 1) throw ContractError("instance seed must be >= 1");

  const int id = function.value;
  std::mt19937_64 rng(derive_seed({0x5017eULL, static_cast<std::uint64_t>(id),
                                   static_cast<std::uint64_t>(instance_seed),
                                   static_cast<std::uint64_t>(d)}));
  std::uniform_real_distribution<double> xopt_dist(-4.0, 4.0);
  std::uniform_real_distribution<double> fopt_dist(-100.0, 100.0);
  std::bernoulli_distribution coin(0.5);

  ProblemInstance inst;
  inst.function_ = function;
  inst.instance_seed_ = instance_seed;
  inst.x_opt_.resize(d);
  for (int i = 0; i < d; ++i) inst.x_opt_(i) = xopt_dist(rng);
  inst.f_opt_ = fopt_dist(rng);
  Eigen::MatrixXd r = random_orthogonal(d, rng);
  Eigen::MatrixXd q = random_orthogonal(d, rng);
  inst.signs_.resize(d);
  for (int i = 0; i < d; ++i) inst.signs_(i) = coin(rng) ? 1.0 : -1.0;

  inst.rotation_ = uses_rotation(id) ? r : Eigen::MatrixXd::Identity(d, d);
  inst.second_rotation_ = uses_second_rotation(id) ? q : Eigen::MatrixXd::Identity(d, d);

  switch (id) {
    case 4:
      for (int i = 0; i < d; i += 2) inst.x_opt_(i) = std::abs(inst.x_opt_(i));
      break;
    case 5:
      inst.x_opt_ = 5.0 * inst.signs_;
      break;
    case 8:
      inst.x_opt_ *= 0.75;
      break;
    case 9:
    case 19: {
      const double scale = std::max(1.0, std::sqrt(static_cast<double>(d)) / 8.0);
      inst.x_opt_ = inst.rotation_.transpose() * Eigen::VectorXd::Constant(d, 0.5 / scale);
      break;
    }
    case 20:
      inst.x_opt_ = (4.2096874633 / 2.0) * inst.signs_;
      break;
    case 22:
      inst.x_opt_ *= 0.98;
      break;
    case 24:
      inst.x_opt_ = (2.5 / 2.0) * inst.signs_;
      break;
    default:
      break;
  }

  if (id == 21 || id == 22) {
    make_peaks(inst, id, d, rng, inst.peak_centers_, inst.peak_scales_, inst.peak_weights_);
  }
  return inst;
}

std::string describe(const ProblemInstance& inst) {
  std::ostringstream os;
  os << "instance v1\tfunction=" << inst.function().value << "\tseed=" << inst.instance_seed()
     << "\tdimension=" << inst.dimension() << "\tf_opt=" << format_double(inst.f_opt());
  return os.str();
}

ProblemInstance parse_descriptor(std::string_view line) {
  const auto fields = split(line, '\t');
  if (fields.size() != 5 || fields[0] != "instance v1") {
    throw DataError("malformed instance descriptor: '" + std::string(line) + "'");
  }
  auto value_of = [&](std::size_t idx, std::string_view key) {
    const auto f = fields[idx];
    if (f.substr(0, key.size()) != key || f.size() <= key.size() || f[key.size()] != '=') {
      throw DataError("expected field '" + std::string(key) + "' in instance descriptor");
    }
    return f.substr(key.size() + 1);
  };
  const FunctionId fid{static_cast<int>(parse_int(value_of(1, "function")))};
  const int seed = static_cast<int>(parse_int(value_of(2, "seed")));
  const int dim = static_cast<int>(parse_int(value_of(3, "dimension")));
  const double f_opt = parse_double(value_of(4, "f_opt"));
  ProblemInstance inst = generate_instance(fid, seed, dim);
  if (inst.f_opt() != f_opt) {
    throw DataError("instance descriptor f_opt does not match the regenerated instance");
  }
  return inst;
}

}  // namespace easyfilter
