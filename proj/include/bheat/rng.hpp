#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace bheat {

/// Counter-based pseudo-random stream. The n-th output is a fixed mixing
/// function of (seed, stream, n), so runs are reproducible bit-for-bit and
/// independent streams are cheap to derive from one master seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ull))), have_cached_(false) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1].
  double uniform_pos() { return 1.0 - uniform(); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Log-uniform on [lo, hi], lo > 0.
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  /// Standard normal via Box-Muller (second value cached).
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double th = 6.283185307179586476925287 * uniform();
    cached_ = r * std::sin(th);
    have_cached_ = true;
    return r * std::cos(th);
  }

  /// Poisson with the given mean. Inversion for small means, Hormann's
  /// PTRS transformed rejection for large ones.
  long poisson(double mean);

  /// Gamma(shape, scale) by Marsaglia-Tsang, boosted for shape < 1.
  double gamma(double shape, double scale);

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
  double cached_ = 0.0;
  bool have_cached_;
};

}  // namespace bheat
