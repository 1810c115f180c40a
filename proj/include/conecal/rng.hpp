#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "conecal/point.hpp"

namespace conecal {

using RngSeed = std::uint64_t;

// Deterministic random stream. Distributions are implemented by hand on top
// of mt19937_64 because std::normal_distribution is implementation-defined;
// identical seeds must replay identical streams everywhere.
class Rng {
 public:
  explicit Rng(RngSeed seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1).
  double uniform01() { return (eng_() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1].
  double uniform01_open_low() { return ((eng_() >> 11) + 1) * 0x1.0p-53; }

  // Standard normal via Box-Muller.
  double gauss() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01_open_low();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  // Uniform index in [0, n), unbiased via rejection.
  std::size_t uniform_index(std::size_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % n);
  }

  Point gaussian_point(std::size_t dim) {
    Point p(dim);
    for (std::size_t i = 0; i < dim; ++i) p[i] = gauss();
    return p;
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace conecal
