// Noiseless BBOB-style function kernels. Each kernel returns f(x) - f_opt.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "easyfilter/errors.hpp"
#include "easyfilter/suite.hpp"

namespace easyfilter {

namespace {

using Eigen::VectorXd;
using Vec = Eigen::Map<const VectorXd>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double tosz(double x) {
  if (x == 0.0) return 0.0;
  const double xh = std::log(std::abs(x));
  const double c1 = x > 0 ? 10.0 : 5.5;
  const double c2 = x > 0 ? 7.9 : 3.1;
  return std::copysign(std::exp(xh + 0.049 * (std::sin(c1 * xh) + std::sin(c2 * xh))), x);
}

VectorXd tosz(VectorXd v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = tosz(v(i));
  return v;
}

VectorXd tasy(VectorXd v, double beta) {
  const auto d = static_cast<double>(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) > 0) v(i) = std::pow(v(i), 1.0 + beta * static_cast<double>(i) / (d - 1) * std::sqrt(v(i)));
  }
  return v;
}

// Diagonal of Λ^alpha.
VectorXd lambda(double alpha, Eigen::Index d) {
  VectorXd l(d);
  for (Eigen::Index i = 0; i < d; ++i) l(i) = std::pow(alpha, 0.5 * static_cast<double>(i) / static_cast<double>(d - 1));
  return l;
}

double fpen(const VectorXd& x) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double over = std::abs(x(i)) - 5.0;
    if (over > 0) s += over * over;
  }
  return s;
}

double rastrigin(const VectorXd& z) {
  double c = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) c += std::cos(kTwoPi * z(i));
  return 10.0 * (static_cast<double>(z.size()) - c) + z.squaredNorm();
}

double rosenbrock(const VectorXd& z) {
  double s = 0.0;
  for (Eigen::Index i = 0; i + 1 < z.size(); ++i) {
    const double a = z(i) * z(i) - z(i + 1);
    const double b = z(i) - 1.0;
    s += 100.0 * a * a + b * b;
  }
  return s;
}

double conditioned_sum(const VectorXd& z, double exponent_max) {
  const auto d = static_cast<double>(z.size());
  double s = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    s += std::pow(10.0, exponent_max * static_cast<double>(i) / (d - 1)) * z(i) * z(i);
  }
  return s;
}

double schaffers(const VectorXd& z) {
  const auto d = static_cast<double>(z.size());
  double s = 0.0;
  for (Eigen::Index i = 0; i + 1 < z.size(); ++i) {
    const double si = std::sqrt(z(i) * z(i) + z(i + 1) * z(i + 1));
    const double root = std::sqrt(si);
    const double sn = std::sin(50.0 * std::pow(si, 0.2));
    s += root + root * sn * sn;
  }
  s /= (d - 1);
  return s * s;
}

double base_value(const ProblemInstance& inst, const VectorXd& x) {
  const Eigen::Index d = x.size();
  const auto dd = static_cast<double>(d);
  const VectorXd& xo = inst.x_opt();
  const Eigen::MatrixXd& r = inst.rotation();
  const Eigen::MatrixXd& q = inst.second_rotation();

  switch (inst.function().value) {
    case 1:
      return (x - xo).squaredNorm();
    case 2:
      return conditioned_sum(tosz(x - xo), 6.0);
    case 3: {
      VectorXd z = tasy(tosz(x - xo), 0.2);
      z = z.cwiseProduct(lambda(10.0, d));
      return rastrigin(z);
    }
    case 4: {
      VectorXd z = tosz(x - xo);
      for (Eigen::Index i = 0; i < d; ++i) {
        double s = std::pow(10.0, 0.5 * static_cast<double>(i) / (dd - 1));
        if (i % 2 == 0 && z(i) > 0) s *= 10.0;
        z(i) *= s;
      }
      return rastrigin(z) + 100.0 * fpen(x);
    }
    case 5: {
      double s = 0.0;
      for (Eigen::Index i = 0; i < d; ++i) {
        const double si = std::copysign(std::pow(10.0, static_cast<double>(i) / (dd - 1)), xo(i));
        const double zi = xo(i) * x(i) < 25.0 ? x(i) : xo(i);
        s += 5.0 * std::abs(si) - si * zi;
      }
      return s;
    }
    case 6: {
      const VectorXd z = q * lambda(10.0, d).cwiseProduct(r * (x - xo));
      double s = 0.0;
      for (Eigen::Index i = 0; i < d; ++i) {
        const double si = z(i) * xo(i) > 0 ? 100.0 : 1.0;
        s += (si * z(i)) * (si * z(i));
      }
      return std::pow(tosz(s), 0.9);
    }
    case 7: {
      const VectorXd zh = lambda(10.0, d).cwiseProduct(r * (x - xo));
      VectorXd zt(d);
      for (Eigen::Index i = 0; i < d; ++i) {
        zt(i) = std::abs(zh(i)) > 0.5 ? std::floor(0.5 + zh(i)) : std::floor(0.5 + 10.0 * zh(i)) / 10.0;
      }
      const VectorXd z = q * zt;
      return 0.1 * std::max(std::abs(zh(0)) / 1.0e4, conditioned_sum(z, 2.0)) + fpen(x);
    }
    case 8: {
      const double c = std::max(1.0, std::sqrt(dd) / 8.0);
      return rosenbrock((c * (x - xo)).array() + 1.0);
    }
    case 9: {
      const double c = std::max(1.0, std::sqrt(dd) / 8.0);
      return rosenbrock((c * (r * x)).array() + 0.5);
    }
    case 10:
      return conditioned_sum(tosz(r * (x - xo)), 6.0);
    case 11: {
      const VectorXd z = tosz(r * (x - xo));
      return 1.0e6 * z(0) * z(0) + z.tail(d - 1).squaredNorm();
    }
    case 12: {
      const VectorXd z = r * tasy(r * (x - xo), 0.5);
      return z(0) * z(0) + 1.0e6 * z.tail(d - 1).squaredNorm();
    }
    case 13: {
      const VectorXd z = q * lambda(10.0, d).cwiseProduct(r * (x - xo));
      return z(0) * z(0) + 100.0 * z.tail(d - 1).norm();
    }
    case 14: {
      const VectorXd z = r * (x - xo);
      double s = 0.0;
      for (Eigen::Index i = 0; i < d; ++i) {
        s += std::pow(std::abs(z(i)), 2.0 + 4.0 * static_cast<double>(i) / (dd - 1));
      }
      return std::sqrt(s);
    }
    case 15: {
      const VectorXd z = r * lambda(10.0, d).cwiseProduct(q * tasy(tosz(r * (x - xo)), 0.2));
      return rastrigin(z);
    }
    case 16: {
      const VectorXd z = r * lambda(0.01, d).cwiseProduct(q * tosz(r * (x - xo)));
      double f0 = 0.0;
      for (int k = 0; k < 12; ++k) f0 += std::pow(0.5, k) * std::cos(kTwoPi * std::pow(3.0, k) * 0.5);
      double s = 0.0;
      for (Eigen::Index i = 0; i < d; ++i) {
        for (int k = 0; k < 12; ++k) {
          s += std::pow(0.5, k) * std::cos(kTwoPi * std::pow(3.0, k) * (z(i) + 0.5));
        }
      }
      const double t = s / dd - f0;
      return 10.0 * t * t * t + 10.0 / dd * fpen(x);
    }
    case 17:
    case 18: {
      const double cond = inst.function().value == 17 ? 10.0 : 1000.0;
      const VectorXd z = lambda(cond, d).cwiseProduct(q * tasy(r * (x - xo), 0.5));
      return schaffers(z) + 10.0 * fpen(x);
    }
    case 19: {
      const double c = std::max(1.0, std::sqrt(dd) / 8.0);
      const VectorXd z = (c * (r * x)).array() + 0.5;
      double s = 0.0;
      for (Eigen::Index i = 0; i + 1 < d; ++i) {
        const double a = z(i) * z(i) - z(i + 1);
        const double b = z(i) - 1.0;
        const double si = 100.0 * a * a + b * b;
        s += si / 4000.0 - std::cos(si);
      }
      return 10.0 * s / (dd - 1) + 10.0;
    }
    case 20: {
      const VectorXd two_abs = 2.0 * xo.cwiseAbs();
      const VectorXd xh = 2.0 * inst.signs().cwiseProduct(x);
      VectorXd zh = xh;
      for (Eigen::Index i = 1; i < d; ++i) zh(i) = xh(i) + 0.25 * (xh(i - 1) - two_abs(i - 1));
      const VectorXd z = 100.0 * (lambda(10.0, d).cwiseProduct(zh - two_abs) + two_abs);
      double s = 0.0;
      for (Eigen::Index i = 0; i < d; ++i) s += z(i) * std::sin(std::sqrt(std::abs(z(i))));
      return -s / (100.0 * dd) + 4.189828872724339 + 100.0 * fpen(z / 100.0);
    }
    case 21:
    case 22: {
      const VectorXd rx = r * x;
      const Eigen::MatrixXd& centers = inst.peak_centers();
      const Eigen::MatrixXd& scales = inst.peak_scales();
      const VectorXd& w = inst.peak_weights();
      double best = 0.0;
      for (Eigen::Index p = 0; p < centers.cols(); ++p) {
        const double quad = (rx - centers.col(p)).array().square().matrix().dot(scales.col(p));
        best = std::max(best, w(p) * std::exp(-quad / (2.0 * dd)));
      }
      const double t = tosz(10.0 - best);
      return t * t + fpen(x);
    }
    case 23: {
      const VectorXd z = q * lambda(100.0, d).cwiseProduct(r * (x - xo));
      double prod = 1.0;
      for (Eigen::Index i = 0; i < d; ++i) {
        double s = 0.0;
        double pow2 = 2.0;
        for (int j = 1; j <= 32; ++j, pow2 *= 2.0) {
          const double v = pow2 * z(i);
          s += std::abs(v - std::nearbyint(v)) / pow2;
        }
        prod *= std::pow(1.0 + static_cast<double>(i + 1) * s, 10.0 / std::pow(dd, 1.2));
      }
      return 10.0 / (dd * dd) * (prod - 1.0) + fpen(x);
    }
    case 24: {
      constexpr double mu0 = 2.5;
      const double s = 1.0 - 1.0 / (2.0 * std::sqrt(dd + 20.0) - 8.2);
      const double mu1 = -std::sqrt((mu0 * mu0 - 1.0) / s);
      const VectorXd xh = 2.0 * inst.signs().cwiseProduct(x);
      const VectorXd z = q * lambda(100.0, d).cwiseProduct(r * (xh.array() - mu0).matrix());
      const double first = (xh.array() - mu0).square().sum();
      const double second = dd + s * (xh.array() - mu1).square().sum();
      double c = 0.0;
      for (Eigen::Index i = 0; i < d; ++i) c += std::cos(kTwoPi * z(i));
      return std::min(first, second) + 10.0 * (dd - c) + 1.0e4 * fpen(x);
    }
    default:
      throw RegistrationError("unknown function id " + std::to_string(inst.function().value));
  }
}

VectorXd checked(const ProblemInstance& inst, std::span<const double> x) {
  if (static_cast<int>(x.size()) != inst.dimension()) {
    throw ContractError("point has dimension " + std::to_string(x.size()) + ", instance has " +
                        std::to_string(inst.dimension()));
  }
  return Vec(x.data(), static_cast<Eigen::Index>(x.size()));
}

}  // namespace

double ProblemInstance::evaluate(std::span<const double> x) const {
  return base_value(*this, checked(*this, x)) + f_opt_;
}

double ProblemInstance::error(std::span<const double> x) const {
  // Rounding in the closed forms can leave values of order 1e-15 below zero
  // at the optimum.
  return std::max(0.0, base_value(*this, checked(*this, x)));
}

}  // namespace easyfilter
