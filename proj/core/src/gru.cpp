#include "easyfilter/gru.hpp"

#include <cmath>
#include <random>
#include <type_traits>

#include "easyfilter/errors.hpp"

namespace easyfilter {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using CMap = Eigen::Map<const MatrixXd>;
using Map = Eigen::Map<MatrixXd>;

// Offsets of each block inside the flat parameter vector.
struct Layout {
  int in, h, c;
  std::size_t wz, wr, wn, uz, ur, un, bz, br, bn, v, cb, total;

  Layout(int input, int hidden, int classes) : in(input), h(hidden), c(classes) {
    const std::size_t w = static_cast<std::size_t>(h) * in;
    const std::size_t u = static_cast<std::size_t>(h) * h;
    wz = 0;
    wr = wz + w;
    wn = wr + w;
    uz = wn + w;
    ur = uz + u;
    un = ur + u;
    bz = un + u;
    br = bz + h;
    bn = br + h;
    v = bn + h;
    cb = v + static_cast<std::size_t>(c) * h;
    total = cb + c;
  }
};

template <class Vec>
auto block(Vec& theta, std::size_t off, int rows, int cols) {
  using M = std::conditional_t<std::is_const_v<Vec>, CMap, Map>;
  return M(theta.data() + off, rows, cols);
}

MatrixXd sigmoid(const MatrixXd& a) { return (1.0 + (-a.array()).exp()).inverse().matrix(); }

MatrixXd softmax_columns(const MatrixXd& logits) {
  MatrixXd p = logits;
  for (Eigen::Index j = 0; j < p.cols(); ++j) {
    p.col(j).array() -= p.col(j).maxCoeff();
    p.col(j) = p.col(j).array().exp();
    p.col(j) /= p.col(j).sum();
  }
  return p;
}

struct Tape {
  std::vector<MatrixXd> h;  // h[0] is the zero state
  std::vector<MatrixXd> z, r, n;
};

}  // namespace

Gru::Gru(int input, int hidden, int classes)
    : input_(input), hidden_(hidden), classes_(classes),
      theta_(VectorXd::Zero(static_cast<Eigen::Index>(parameter_count(input, hidden, classes)))) {
  if (input < 1 || hidden < 1 || classes < 2) throw ContractError("invalid GRU shape");
}

std::size_t Gru::parameter_count(int input, int hidden, int classes) { return Layout(input, hidden, classes).total; }

void Gru::initialize(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double a = 1.0 / std::sqrt(static_cast<double>(hidden_));
  // Map raw 53-bit draws to [-a, a) directly so values match across vendors.
  for (Eigen::Index i = 0; i < theta_.size(); ++i) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    theta_(i) = -a + 2.0 * a * u;
  }
}

std::vector<MatrixXd> to_steps(const std::vector<const std::vector<double>*>& sequences, int input) {
  if (sequences.empty()) throw ContractError("empty batch");
  const std::size_t len = sequences.front()->size();
  if (len == 0 || len % static_cast<std::size_t>(input) != 0) throw ContractError("sequence length is not whole frames");
  const std::size_t steps = len / static_cast<std::size_t>(input);
  std::vector<MatrixXd> out(steps, MatrixXd(input, static_cast<Eigen::Index>(sequences.size())));
  for (std::size_t b = 0; b < sequences.size(); ++b) {
    if (sequences[b]->size() != len) throw ContractError("sequences in a batch must have equal length");
    for (std::size_t t = 0; t < steps; ++t)
      for (int i = 0; i < input; ++i)
        out[t](i, static_cast<Eigen::Index>(b)) = (*sequences[b])[t * static_cast<std::size_t>(input) + i];
  }
  return out;
}

namespace {

MatrixXd run_forward(const VectorXd& theta, const Layout& L, const std::vector<MatrixXd>& steps, Tape* tape) {
  if (steps.empty()) throw ContractError("empty sequence");
  const auto B = steps.front().cols();
  const auto Wz = block(theta, L.wz, L.h, L.in), Wr = block(theta, L.wr, L.h, L.in), Wn = block(theta, L.wn, L.h, L.in);
  const auto Uz = block(theta, L.uz, L.h, L.h), Ur = block(theta, L.ur, L.h, L.h), Un = block(theta, L.un, L.h, L.h);
  const auto bz = block(theta, L.bz, L.h, 1), br = block(theta, L.br, L.h, 1), bn = block(theta, L.bn, L.h, 1);
  const auto V = block(theta, L.v, L.c, L.h);
  const auto c = block(theta, L.cb, L.c, 1);

  MatrixXd h = MatrixXd::Zero(L.h, B);
  if (tape) tape->h.push_back(h);
  for (const auto& x : steps) {
    if (x.rows() != L.in || x.cols() != B) throw ContractError("input frame has the wrong shape");
    MatrixXd z = Wz * x + Uz * h;
    z.colwise() += bz.col(0);
    z = sigmoid(z);
    MatrixXd r = Wr * x + Ur * h;
    r.colwise() += br.col(0);
    r = sigmoid(r);
    MatrixXd n = Wn * x + Un * r.cwiseProduct(h);
    n.colwise() += bn.col(0);
    n = n.array().tanh().matrix();
    h = (1.0 - z.array()).matrix().cwiseProduct(n) + z.cwiseProduct(h);
    if (tape) {
      tape->z.push_back(std::move(z));
      tape->r.push_back(std::move(r));
      tape->n.push_back(std::move(n));
      tape->h.push_back(h);
    }
  }
  MatrixXd logits = V * h;
  logits.colwise() += c.col(0);
  return softmax_columns(logits);
}

}  // namespace

MatrixXd Gru::forward(const std::vector<MatrixXd>& steps) const {
  return run_forward(theta_, Layout(input_, hidden_, classes_), steps, nullptr);
}

double Gru::loss(const std::vector<MatrixXd>& steps, std::span<const int> labels, VectorXd* grad) const {
  const Layout L(input_, hidden_, classes_);
  Tape tape;
  const MatrixXd p = run_forward(theta_, L, steps, grad ? &tape : nullptr);
  const auto B = p.cols();
  if (static_cast<Eigen::Index>(labels.size()) != B) throw ContractError("one label per sequence required");
  double total = 0.0;
  for (Eigen::Index j = 0; j < B; ++j) {
    const int y = labels[static_cast<std::size_t>(j)];
    if (y < 0 || y >= classes_) throw ContractError("label outside the class range");
    total -= std::log(std::max(p(y, j), 1e-300));
  }
  const double mean = total / static_cast<double>(B);
  if (!grad) return mean;

  grad->setZero(theta_.size());
  auto gWz = block(*grad, L.wz, L.h, L.in), gWr = block(*grad, L.wr, L.h, L.in), gWn = block(*grad, L.wn, L.h, L.in);
  auto gUz = block(*grad, L.uz, L.h, L.h), gUr = block(*grad, L.ur, L.h, L.h), gUn = block(*grad, L.un, L.h, L.h);
  auto gbz = block(*grad, L.bz, L.h, 1), gbr = block(*grad, L.br, L.h, 1), gbn = block(*grad, L.bn, L.h, 1);
  auto gV = block(*grad, L.v, L.c, L.h);
  auto gc = block(*grad, L.cb, L.c, 1);
  const auto Uz = block(theta_, L.uz, L.h, L.h), Ur = block(theta_, L.ur, L.h, L.h), Un = block(theta_, L.un, L.h, L.h);
  const auto V = block(theta_, L.v, L.c, L.h);

  MatrixXd dlogits = p;
  for (Eigen::Index j = 0; j < B; ++j) dlogits(labels[static_cast<std::size_t>(j)], j) -= 1.0;
  dlogits /= static_cast<double>(B);
  gV = dlogits * tape.h.back().transpose();
  gc = dlogits.rowwise().sum();
  MatrixXd dh = V.transpose() * dlogits;

  for (std::size_t t = steps.size(); t-- > 0;) {
    const MatrixXd& x = steps[t];
    const MatrixXd& hp = tape.h[t];
    const MatrixXd& z = tape.z[t];
    const MatrixXd& r = tape.r[t];
    const MatrixXd& n = tape.n[t];

    const MatrixXd dz = dh.cwiseProduct(hp - n);
    const MatrixXd dn = dh.cwiseProduct((1.0 - z.array()).matrix());
    MatrixXd dh_prev = dh.cwiseProduct(z);

    const MatrixXd dan = dn.cwiseProduct((1.0 - n.array().square()).matrix());
    const MatrixXd rh = r.cwiseProduct(hp);
    gWn.noalias() += dan * x.transpose();
    gUn.noalias() += dan * rh.transpose();
    gbn += dan.rowwise().sum();
    const MatrixXd drh = Un.transpose() * dan;
    const MatrixXd dr = drh.cwiseProduct(hp);
    dh_prev += drh.cwiseProduct(r);

    const MatrixXd daz = dz.cwiseProduct(z.cwiseProduct((1.0 - z.array()).matrix()));
    gWz.noalias() += daz * x.transpose();
    gUz.noalias() += daz * hp.transpose();
    gbz += daz.rowwise().sum();
    dh_prev.noalias() += Uz.transpose() * daz;

    const MatrixXd dar = dr.cwiseProduct(r.cwiseProduct((1.0 - r.array()).matrix()));
    gWr.noalias() += dar * x.transpose();
    gUr.noalias() += dar * hp.transpose();
    gbr += dar.rowwise().sum();
    dh_prev.noalias() += Ur.transpose() * dar;

    dh = std::move(dh_prev);
  }
  return mean;
}

void Adam::step(VectorXd& theta, const VectorXd& grad) {
  if (m_.size() != theta.size()) {
    m_ = VectorXd::Zero(theta.size());
    v_ = VectorXd::Zero(theta.size());
    t_ = 0;
  }
  ++t_;
  m_ = beta1 * m_ + (1.0 - beta1) * grad;
  v_ = beta2 * v_ + (1.0 - beta2) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t_));
  theta.array() -= learning_rate * (m_.array() / c1) / ((v_.array() / c2).sqrt() + epsilon);
}

}  // namespace easyfilter
