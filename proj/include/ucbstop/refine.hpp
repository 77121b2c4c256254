#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <utility>

#include "ucbstop/golden.hpp"

namespace ucbstop::detail {

/// Coordinate-wise golden-section ascent of f from x, each coordinate
/// projected to [lo, hi]. Never returns a value below f(x); stops when a
/// full sweep yields no improvement or the evaluation cap is reached.
template <class F>
std::pair<Eigen::VectorXd, double> coordinate_refine(F&& f, Eigen::VectorXd x,
                                                     double lo, double hi,
                                                     int max_evals) {
  double fx = f(x);
  int used = 1;
  const int d = static_cast<int>(x.size());
  const int per_line = std::max(12, max_evals / (2 * d));
  bool improved = true;
  while (improved && used + 3 <= max_evals) {
    improved = false;
    for (int j = 0; j < d; ++j) {
      const int budget = std::min(per_line, max_evals - used);
      if (budget < 3) break;
      const auto line = [&](double t) {
        Eigen::VectorXd y = x;
        y[j] = t;
        return -f(y);
      };
      const auto [tj, neg] =
          golden_min(line, lo, hi, (hi - lo) * 1e-9, budget);
      used += budget;
      if (-neg > fx) {
        x[j] = tj;
        fx = -neg;
        improved = true;
      }
    }
  }
  return {std::move(x), fx};
}

}  // namespace ucbstop::detail
