#pragma once

// Counter-based random substreams. Every draw is a pure function of
// (seed, stream, step), so simulations are bit-reproducible under any
// parallel schedule: a path never shares generator state with another.

#include <cmath>
#include <cstdint>

#include "sslab/linalg.hpp"

namespace sslab {

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class SubstreamRng {
 public:
  SubstreamRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t step = 0) {
    std::uint64_t h = 0x853C49E6748FEA9Bull ^ mix64(seed + 0x9E3779B97F4A7C15ull);
    h = mix64(h + 0x9E3779B97F4A7C15ull * (stream + 1));
    h = mix64(h + 0xC2B2AE3D27D4EB4Full * (step + 1));
    state_ = h;
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix64(state_);
  }

  // Uniform on (0,1), never exactly 0 or 1.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; pairs are cached.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  Vec normal_vec(int n) {
    Vec v(static_cast<std::size_t>(n));
    for (auto& x : v) x = normal();
    return v;
  }

  // Uniform point in an axis-aligned box.
  Vec uniform_in_box(const Vec& lo, const Vec& hi) {
    Vec x(lo.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = lo[i] + (hi[i] - lo[i]) * uniform();
    return x;
  }

  // Poisson count by Knuth's product method, with recursive halving for
  // large means (only tiny means occur in practice: rate * dt).
  long poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean > 30.0) return poisson(mean * 0.5) + poisson(mean * 0.5);
    const double limit = std::exp(-mean);
    long k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit && k < 100000);
    return k - 1;
  }

 private:
  std::uint64_t state_ = 0;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace sslab
