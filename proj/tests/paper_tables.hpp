#pragma once

// Frozen rows of the published bound-comparison tables, used as expected
// values by the certify and harness tests. c1_floor marks rows whose c1
// equals the variance floor c2(t) rather than a round literal.

#include <array>
#include <cstdint>

#include "ucbstop/certify.hpp"

namespace paper {

struct Row {
  std::int64_t t;
  double c1;
  bool c1_floor;
  double c2, sqrt_beta, sqrt_eta, sqrt_alpha, s, n_eta, n_alpha;
  double bound_new, bound_old, ratio;
};

// sigma=1e-2, n_L=4, a=b=r=1, d=4, delta=0.1
inline constexpr std::array<Row, 9> kTable1 = {{
    {20, 2.24e-3, true, 2.24e-3, 10.172, 3.775, 9.357, 2.325, 18.99, 44.78,
     3.03e-2, 4.55e-2, 0.666},
    {20, 1.00e-2, false, 2.24e-3, 10.172, 3.708, 9.495, 2.329, 14.56, 158.30,
     1.38e-1, 2.03e-1, 0.679},
    {20, 1.00e-1, false, 2.24e-3, 10.172, 3.688, 9.737, 2.338, 13.45, 1506.33,
     1.39, 2.03, 0.681},
    {100, 1.00e-3, true, 1.00e-3, 11.647, 4.519, 10.035, 1.702, 19.55, 41.94,
     1.49e-2, 2.33e-2, 0.642},
    {100, 1.00e-2, false, 1.00e-3, 11.647, 4.447, 10.238, 1.706, 13.93, 309.46,
     1.60e-1, 2.33e-1, 0.687},
    {100, 1.00e-1, false, 1.00e-3, 11.647, 4.438, 10.465, 1.711, 13.39, 3044.43,
     1.61, 2.33, 0.690},
    {500, 4.47e-4, true, 4.47e-4, 12.955, 5.162, 10.670, 1.400, 19.95, 40.19,
     7.25e-3, 1.16e-2, 0.625},
    {500, 1.00e-2, false, 4.47e-4, 12.955, 5.091, 10.933, 1.404, 13.62, 636.44,
     1.80e-1, 2.59e-1, 0.694},
    {500, 1.00e-1, false, 4.47e-4, 12.955, 5.087, 11.147, 1.407, 13.36, 6368.56,
     1.80, 2.59, 0.696},
}};

// sigma=1e-2, n_L=10, a=b=r=1, d=2, delta=0.1
inline constexpr std::array<Row, 9> kTable4 = {{
    {20, 2.24e-3, true, 2.24e-3, 7.468, 3.751, 7.050, 2.464, 17.28, 31.13,
     2.48e-2, 3.34e-2, 0.742},
    {20, 1.00e-2, false, 2.24e-3, 7.468, 3.668, 7.224, 2.472, 12.43, 104.61,
     1.11e-1, 1.49e-1, 0.746},
    {20, 1.00e-1, false, 2.24e-3, 7.468, 3.643, 7.468, 2.430, 11.26, 840.33,
     1.11, 1.49, 0.744},
    {100, 1.00e-3, true, 1.00e-3, 8.665, 4.499, 7.710, 1.797, 17.78, 29.62,
     1.25e-2, 1.73e-2, 0.719},
    {100, 1.00e-2, false, 1.00e-3, 8.665, 4.410, 7.961, 1.803, 11.75, 205.60,
     1.30e-1, 1.73e-1, 0.752},
    {100, 1.00e-1, false, 1.00e-3, 8.665, 4.399, 8.248, 1.811, 11.17, 2028.60,
     1.31, 1.73, 0.754},
    {500, 4.47e-4, true, 4.47e-4, 9.716, 5.144, 8.317, 1.473, 18.13, 28.71,
     6.13e-3, 8.69e-3, 0.705},
    {500, 1.00e-2, false, 4.47e-4, 9.716, 5.057, 8.640, 1.479, 11.41, 426.00,
     1.47e-1, 1.94e-1, 0.758},
    {500, 1.00e-1, false, 4.47e-4, 9.716, 5.052, 8.907, 1.483, 11.14, 4288.34,
     1.48, 1.94, 0.760},
}};

// sigma=1e-2, n_L=4, a=b=r=1, d=2, delta=0.01
inline constexpr std::array<Row, 9> kTable5 = {{
    {20, 2.24e-3, true, 2.24e-3, 7.879, 4.340, 7.426, 2.481, 213.64, 354.70,
     2.69e-2, 3.52e-2, 0.764},
    {20, 1.00e-2, false, 2.24e-3, 7.879, 4.263, 7.586, 2.488, 150.64, 1160.77,
     1.21e-1, 1.58e-1, 0.770},
    {20, 1.00e-1, false, 2.24e-3, 7.879, 4.238, 7.879, 2.499, 135.00, 10805.56,
     1.21, 1.58, 0.769},
    {100, 1.00e-3, true, 1.00e-3, 9.021, 5.005, 8.055, 1.806, 218.00, 343.31,
     1.33e-2, 1.80e-2, 0.737},
    {100, 1.00e-2, false, 1.00e-3, 9.021, 4.921, 8.293, 1.812, 141.44, 2327.61,
     1.39e-1, 1.80e-1, 0.770},
    {100, 1.00e-1, false, 1.00e-3, 9.021, 4.911, 8.568, 1.819, 134.12, 22827.71,
     1.39, 1.80, 0.772},
    {500, 4.47e-4, true, 4.47e-4, 10.035, 5.596, 8.639, 1.479, 221.15, 335.78,
     6.47e-3, 8.98e-3, 0.721},
    {500, 1.00e-2, false, 4.47e-4, 10.035, 5.512, 8.948, 1.484, 137.07, 4884.66,
     1.55e-1, 2.01e-1, 0.773},
    {500, 1.00e-1, false, 4.47e-4, 10.035, 5.508, 9.205, 1.489, 133.70, 49016.45,
     1.55, 2.01, 0.774},
}};

// sigma=1e-2, n_L=10, a=b=r=1, d=6, delta=0.01
inline constexpr std::array<Row, 9> kTable6 = {{
    {20, 2.24e-3, true, 2.24e-3, 12.825, 4.268, 11.571, 2.259, 153.83, 400.13,
     3.66e-2, 5.74e-2, 0.638},
    {20, 1.00e-2, false, 2.24e-3, 12.825, 4.213, 11.685, 2.262, 120.46, 1431.66,
     1.69e-1, 2.57e-1, 0.659},
    {20, 1.00e-1, false, 2.24e-3, 12.825, 4.196, 11.883, 2.268, 112.03, 13585.01,
     1.70, 2.57, 0.663},
    {100, 1.00e-3, true, 1.00e-3, 14.476, 4.942, 12.266, 1.657, 157.28, 378.50,
     1.77e-2, 2.90e-2, 0.611},
    {100, 1.00e-2, false, 1.00e-3, 14.476, 4.882, 12.435, 1.660, 115.61, 2852.55,
     1.92e-1, 2.90e-1, 0.663},
    {100, 1.00e-1, false, 1.00e-3, 14.476, 4.875, 12.623, 1.663, 111.55, 27971.65,
     1.93, 2.90, 0.668},
    {500, 4.47e-4, true, 4.47e-4, 15.957, 5.539, 12.922, 1.365, 159.91, 364.08,
     8.46e-3, 1.43e-2, 0.593},
    {500, 1.00e-2, false, 4.47e-4, 15.957, 5.478, 13.143, 1.368, 113.24, 5923.28,
     2.13e-1, 3.19e-1, 0.668},
    {500, 1.00e-1, false, 4.47e-4, 15.957, 5.475, 13.322, 1.370, 111.32, 59045.40,
     2.14, 3.19, 0.671},
}};

inline ucbstop::certify::ProblemConstants consts_table1() {
  ucbstop::certify::ProblemConstants c;
  c.d = 4; c.delta = 0.1; c.n_L = 4.0; c.sigma = 1e-2;
  return c;
}
inline ucbstop::certify::ProblemConstants consts_table4() {
  ucbstop::certify::ProblemConstants c;
  c.d = 2; c.delta = 0.1; c.n_L = 10.0; c.sigma = 1e-2;
  return c;
}
inline ucbstop::certify::ProblemConstants consts_table5() {
  ucbstop::certify::ProblemConstants c;
  c.d = 2; c.delta = 0.01; c.n_L = 4.0; c.sigma = 1e-2;
  return c;
}
inline ucbstop::certify::ProblemConstants consts_table6() {
  ucbstop::certify::ProblemConstants c;
  c.d = 6; c.delta = 0.01; c.n_L = 10.0; c.sigma = 1e-2;
  return c;
}

// Actual c1 passed to the solver: floor rows use the exact variance floor,
// the others use the printed literal.
inline double row_c1(const Row& row, double sigma) {
  return row.c1_floor ? ucbstop::certify::variance_floor(row.t, sigma) : row.c1;
}

}  // namespace paper
