#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ucbstop::qmc {

namespace detail {

// Direction-number seeds (primitive polynomial degree s, coefficient word a,
// initial m values) for dimensions 2..10, from the Joe & Kuo "new-joe-kuo-6"
// table. Dimension 1 is the van der Corput sequence in base 2.
struct SobolSeed {
  int s;
  std::uint32_t a;
  std::array<std::uint32_t, 5> m;
};

inline constexpr std::array<SobolSeed, 9> kSobolSeeds = {{
    {1, 0, {1, 0, 0, 0, 0}},
    {2, 1, {1, 3, 0, 0, 0}},
    {3, 1, {1, 3, 1, 0, 0}},
    {3, 2, {1, 1, 1, 0, 0}},
    {4, 1, {1, 1, 3, 3, 0}},
    {4, 4, {1, 3, 5, 13, 0}},
    {5, 2, {1, 1, 5, 5, 17}},
    {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}},
}};

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Gray-code Sobol sequence over [0,1)^dim with 32 bits of resolution.
/// A nonzero scramble seed applies a fixed per-dimension digital shift
/// (XOR mask); seed 0 reproduces the unscrambled sequence, whose first
/// point is the origin.
class Sobol {
 public:
  static constexpr int kMaxDim = 10;

  explicit Sobol(int dim, std::uint64_t scramble_seed = 0)
      : dim_(checked_dim(dim)), state_(static_cast<std::size_t>(dim), 0),
        mask_(static_cast<std::size_t>(dim), 0) {
    v_.resize(static_cast<std::size_t>(dim) * kBits);
    for (int k = 0; k < kBits; ++k) direction(0)[k] = 1u << (kBits - 1 - k);
    for (int j = 1; j < dim; ++j) {
      const auto& seed = detail::kSobolSeeds[static_cast<std::size_t>(j - 1)];
      std::uint32_t* v = direction(j);
      for (int k = 0; k < seed.s; ++k) {
        v[k] = seed.m[static_cast<std::size_t>(k)] << (kBits - 1 - k);
      }
      for (int k = seed.s; k < kBits; ++k) {
        v[k] = v[k - seed.s] ^ (v[k - seed.s] >> seed.s);
        for (int i = 1; i < seed.s; ++i) {
          if ((seed.a >> (seed.s - 1 - i)) & 1u) v[k] ^= v[k - i];
        }
      }
    }
    if (scramble_seed != 0) {
      std::uint64_t s = scramble_seed;
      for (int j = 0; j < dim; ++j) {
        mask_[static_cast<std::size_t>(j)] =
            static_cast<std::uint32_t>(detail::splitmix64(s) >> 32);
      }
    }
  }

  [[nodiscard]] int dim() const { return dim_; }

  /// Appends the next point's coordinates to out (dim values in [0,1)).
  void next(std::vector<double>& out) {
    if (count_ > 0) {
      const int c = std::countr_zero(count_);
      if (c >= kBits) throw std::overflow_error("Sobol: sequence exhausted");
      for (int j = 0; j < dim_; ++j) {
        state_[static_cast<std::size_t>(j)] ^= direction(j)[c];
      }
    }
    ++count_;
    for (int j = 0; j < dim_; ++j) {
      const std::uint32_t bits =
          state_[static_cast<std::size_t>(j)] ^ mask_[static_cast<std::size_t>(j)];
      out.push_back(static_cast<double>(bits) * kScale);
    }
  }

  [[nodiscard]] std::vector<double> next() {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(dim_));
    next(out);
    return out;
  }

  /// Flattened row-major matrix of the next n points.
  [[nodiscard]] std::vector<double> take(std::size_t n) {
    std::vector<double> out;
    out.reserve(n * static_cast<std::size_t>(dim_));
    for (std::size_t i = 0; i < n; ++i) next(out);
    return out;
  }

 private:
  static constexpr int kBits = 32;
  static constexpr double kScale = 1.0 / 4294967296.0;

  static int checked_dim(int dim) {
    if (dim < 1 || dim > kMaxDim) {
      throw std::invalid_argument("Sobol: dim must be in [1, 10]");
    }
    return dim;
  }

  std::uint32_t* direction(int j) {
    return v_.data() + static_cast<std::size_t>(j) * kBits;
  }

  int dim_;
  std::uint64_t count_ = 0;
  std::vector<std::uint32_t> v_;
  std::vector<std::uint32_t> state_;
  std::vector<std::uint32_t> mask_;
};

}  // namespace ucbstop::qmc
