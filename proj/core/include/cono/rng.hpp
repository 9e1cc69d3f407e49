#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace cono {

// SplitMix64 finalizer. Used both to derive engine seeds and as a stateless
// counter-based generator.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit word.
constexpr double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Stateless uniform draw in [0, 1) determined by (seed, stream, counter).
constexpr double counter_uniform(std::uint64_t seed, std::uint64_t stream,
                                 std::uint64_t counter) {
  return to_unit(mix64(mix64(seed ^ mix64(stream)) + counter));
}

/// Seeded engine with portable conversions. The standard distributions are
/// implementation-defined, so uniforms are derived from the raw engine bits to
/// keep traces bitwise reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  std::uint64_t next() { return engine_(); }
  double uniform() { return to_unit(engine_()); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  bool bernoulli(double p) { return uniform() < p; }

  // Open interval (0, 1], safe for logarithms.
  double uniform_positive() { return 1.0 - uniform(); }

  double standard_normal() {
    // Box-Muller; one value per call keeps the stream position simple.
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    const double r = std::sqrt(-2.0 * std::log(uniform_positive()));
    return r * std::cos(kTwoPi * uniform());
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cono
