#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "pickgrass/types.hpp"

namespace pickgrass {

inline constexpr std::uint64_t kDefaultSeed = 0xDA5EED;

// Deterministic random source. std::mt19937_64 output is pinned by the
// standard; the distributions below are hand-rolled because the standard
// library's distribution objects are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = kDefaultSeed) : gen_(seed) {}

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  cplx complex_normal() { return cplx(normal(), normal()); }

  // Uniform on the complex unit sphere in C^d.
  Vec unit_vector(int d) {
    Vec v(d);
    double n2 = 0.0;
    do {
      for (int i = 0; i < d; ++i) v(i) = complex_normal();
      n2 = v.squaredNorm();
    } while (n2 < 1e-12);
    return v / std::sqrt(n2);
  }

  // Uniform direction scaled to a radius drawn uniformly from [0, rmax).
  Vec ball_point(int d, double rmax) {
    Vec v = unit_vector(d);
    // Uniform radius (not volume-uniform); fine for sampling test points.
    return v * (rmax * uniform());
  }

  Mat matrix(int rows, int cols) {
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = complex_normal();
    return m;
  }

  int integer(int lo, int hi) {  // inclusive range, small spans only
    return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace pickgrass
