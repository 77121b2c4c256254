#pragma once

#include <cmath>
#include <stdexcept>

namespace ucbstop::stats {

inline constexpr double kInvSqrt2 = 0.70710678118654752440;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

/// Probability strictly inside (0, 1). Construction rejects 0, 1, NaN and
/// anything outside the open interval.
class Probability {
 public:
  explicit Probability(double value) : value_(value) {
    if (!(value > 0.0) || !(value < 1.0)) {
      throw std::domain_error("Probability must lie strictly in (0, 1)");
    }
  }
  [[nodiscard]] double value() const noexcept { return value_; }

 private:
  double value_;
};

[[nodiscard]] inline double std_normal_pdf(double x) noexcept {
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

/// Lower tail P(Z <= x). Evaluated through erfc so the small-probability
/// branch keeps full relative accuracy.
[[nodiscard]] inline double std_normal_cdf(double x) {
  if (std::isnan(x)) throw std::domain_error("std_normal_cdf: NaN input");
  return 0.5 * std::erfc(-x * kInvSqrt2);
}

/// Upper tail P(Z > x) = 1 - cdf(x), relative-accurate deep into the tail.
[[nodiscard]] inline double std_normal_tail(double x) {
  if (std::isnan(x)) throw std::domain_error("std_normal_tail: NaN input");
  return 0.5 * std::erfc(x * kInvSqrt2);
}

namespace detail {

// Acklam's rational approximation to the probit, |relative error| < 1.15e-9.
// Only the lower half is needed; callers reflect p > 0.5.
[[nodiscard]] inline double acklam_lower(double p) {
  constexpr double kPLow = 0.02425;
  if (p < kPLow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((-7.784894002430293e-03 * q - 3.223964580411365e-01) * q -
               2.400758277161838e+00) * q - 2.549732539343734e+00) * q +
             4.374664141464968e+00) * q + 2.938163982698783e+00) /
           ((((7.784695709041462e-03 * q + 3.224671290700398e-01) * q +
              2.445134137142996e+00) * q + 3.754408661907416e+00) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((-3.969683028665376e+01 * r + 2.209460984245205e+02) * r -
             2.759285104469687e+02) * r + 1.383577518672690e+02) * r -
           3.066479806614716e+01) * r + 2.506628277459239e+00) * q /
         (((((-5.447609879822406e+01 * r + 1.615858368580409e+02) * r -
             1.556989798598866e+02) * r + 6.680131188771972e+01) * r -
           1.328068155288572e+01) * r + 1.0);
}

// Two Newton corrections. The residual is formed in the lower tail where
// the erfc-based cdf is relative-accurate, so the polish holds for p down
// to the smallest supported probabilities.
[[nodiscard]] inline double quantile_lower(double p) {
  double x = acklam_lower(p);
  for (int i = 0; i < 2; ++i) {
    const double err = std_normal_cdf(x) - p;
    x -= err / std_normal_pdf(x);
  }
  return x;
}

}  // namespace detail

/// Inverse cdf. Throws unless p lies strictly in (0, 1).
[[nodiscard]] inline double std_normal_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::domain_error("std_normal_quantile: p must lie in (0, 1)");
  }
  if (p == 0.5) return 0.0;
  return p < 0.5 ? detail::quantile_lower(p) : -detail::quantile_lower(1.0 - p);
}

/// Inverse of the upper tail: x with P(Z > x) = q. Computed directly from
/// the tail mass, so tiny q never passes through 1 - q.
[[nodiscard]] inline double std_normal_upper_quantile(double q) {
  if (!(q > 0.0) || !(q < 1.0)) {
    throw std::domain_error("std_normal_upper_quantile: q must lie in (0, 1)");
  }
  if (q == 0.5) return 0.0;
  return q < 0.5 ? -detail::quantile_lower(q) : detail::quantile_lower(1.0 - q);
}

}  // namespace ucbstop::stats
