#pragma once

#include <utility>

namespace ucbstop::detail {

/// Golden-section minimization on [lo, hi]. Endpoints are evaluated too and
/// the best point ever sampled is returned, so a flat or multimodal f still
/// yields the best sample seen rather than a stale midpoint.
template <class F>
[[nodiscard]] std::pair<double, double> golden_min(F&& f, double lo, double hi,
                                                   double tol,
                                                   int max_evals = 200) {
  constexpr double kPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double best_x = a, best_f = f(a);
  int evals = 1;
  if (b > a) {
    const double fb_end = f(b);
    ++evals;
    if (fb_end < best_f) { best_x = b; best_f = fb_end; }
  } else {
    return {best_x, best_f};
  }
  double c = b - kPhi * (b - a);
  double d = a + kPhi * (b - a);
  double fc = f(c), fd = f(d);
  evals += 2;
  if (fc < best_f) { best_x = c; best_f = fc; }
  if (fd < best_f) { best_x = d; best_f = fd; }
  while (b - a > tol && evals < max_evals) {
    if (fc <= fd) {
      b = d; d = c; fd = fc;
      c = b - kPhi * (b - a);
      fc = f(c);
      if (fc < best_f) { best_x = c; best_f = fc; }
    } else {
      a = c; c = d; fc = fd;
      d = a + kPhi * (b - a);
      fd = f(d);
      if (fd < best_f) { best_x = d; best_f = fd; }
    }
    ++evals;
  }
  return {best_x, best_f};
}

}  // namespace ucbstop::detail
