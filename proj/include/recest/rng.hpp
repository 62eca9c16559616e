#ifndef RECEST_RNG_HPP
#define RECEST_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace recest {

/// splitmix64 finalizer; used both to whiten user seeds and to derive
/// per-replication seeds deterministically.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for replication r of a run with the given base seed.
inline std::uint64_t mix_seed(std::uint64_t base_seed, std::uint64_t index) {
  return splitmix64(splitmix64(base_seed) + index);
}

/// The repo's pinned generator: mt19937_64 for the bit stream (its output
/// sequence is fixed by the standard) with hand-rolled conversions, so
/// that series and CSV outputs are bit-reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; the second draw of each pair is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  /// Poisson draw. Inversion by sequential search for small means; for
  /// large means the rounded normal approximation (counts there are far
  /// beyond any regime where the discreteness error matters).
  double poisson(double mean) {
    if (mean <= 0.0) return 0.0;
    if (mean < 64.0) {
      const double l = std::exp(-mean);
      double p = 1.0;
      long k = 0;
      do {
        ++k;
        p *= uniform();
      } while (p > l);
      return static_cast<double>(k - 1);
    }
    const double x = std::floor(mean + std::sqrt(mean) * normal() + 0.5);
    return x < 0.0 ? 0.0 : x;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace recest

#endif  // RECEST_RNG_HPP
