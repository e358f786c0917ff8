#pragma once

#include <cmath>
#include <cstdint>

namespace gda {

// SplitMix64 (Steele, Lea & Flood 2014). Chosen as the experiment RNG because
// the integer stream is fully specified by the seed and portable across
// platforms, unlike std::normal_distribution.
//
// Gaussian variates use a plain Box-Muller transform on 53-bit uniforms, one
// pair per two draws, with the cosine branch returned first.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double next_gaussian() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = next_uniform();
    if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;  // keep log(u1) finite
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
  }

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace gda
