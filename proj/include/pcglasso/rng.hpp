#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace pcglasso {

/// Deterministic random stream, version 1.
///
/// mt19937_64 seeded directly; uniforms take the top 53 bits; normals use
/// Box-Muller with two fresh uniforms per draw (no caching). Unlike
/// std::normal_distribution, the value sequence is identical across
/// standard-library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1].
  double uniform_pos() {
    return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller.
  double normal() {
    double u1 = uniform_pos();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  /// Uniform integer on [0, bound) by rejection (unbiased).
  std::uint64_t uniform_int(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::uniform_int: bound must be positive");
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t r = gen_();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace pcglasso
