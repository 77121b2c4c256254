#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace ucbstop::gp {

enum class KernelFamily { SquaredExponential, Matern52 };

struct KernelSpec {
  KernelFamily family = KernelFamily::SquaredExponential;
  double lengthscale = 1.0;
};

/// Unit-variance stationary kernel, so k(x, x) = 1 for both families.
[[nodiscard]] inline double kernel_eval(const KernelSpec& k,
                                        const Eigen::VectorXd& x,
                                        const Eigen::VectorXd& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("kernel_eval: input dimensions differ");
  }
  if (!(k.lengthscale > 0.0)) {
    throw std::invalid_argument("kernel_eval: lengthscale must be positive");
  }
  const double p = (x - y).norm();
  switch (k.family) {
    case KernelFamily::SquaredExponential: {
      const double z = p / k.lengthscale;
      return std::exp(-0.5 * z * z);
    }
    case KernelFamily::Matern52: {
      const double z = std::sqrt(5.0) * p / k.lengthscale;
      return (1.0 + z + z * z / 3.0) * std::exp(-z);
    }
  }
  throw std::logic_error("kernel_eval: unknown kernel family");
}

}  // namespace ucbstop::gp
