// rng.hpp — Deterministic seeding and Gaussian sampling for reproducible
// campaigns. std::mt19937_64 output is fixed by the standard; the bit-level
// uniform->double and Box-Muller conversions below are explicit so results do
// not depend on the implementation-defined std::normal_distribution.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "core.hpp"

namespace opssa {

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

// Seed of the stream-th derived stream. Trials seeded this way are
// independent of execution order, which is what makes parallel campaigns
// reproduce sequential ones.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return mix64(master + 0x9E3779B97F4A7C15ULL * (stream + 1));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  // [0, 1), 53 random mantissa bits
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // (0, 1], safe to feed into log()
  double uniform_open() {
    return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_open()));
    const double t = 2.0 * std::numbers::pi * uniform01();
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  // standard complex normal, E|z|^2 = 1
  Complex cgaussian() {
    const double x = gaussian();
    const double y = gaussian();
    return Complex(x, y) * std::numbers::sqrt2 * 0.5;
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

inline Vector gaussian_vector(Rng& rng, Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = rng.cgaussian();
  return v;
}

// row-major fill order (fixed, part of the reproducibility contract)
inline Matrix gaussian_matrix(Rng& rng, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.cgaussian();
  return m;
}

}  // namespace opssa
