#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace lcdm {

// 64-bit finalizer (splitmix64 step). Decorrelates (seed, stream) pairs before
// seeding the engine so that nearby stream ids give unrelated sequences.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seedable, splittable stream: substream t of master seed s is RngStream(s, t).
// The engine is std::mt19937_64 (output sequence fixed by the standard); all
// variate transforms are explicit rather than std::*_distribution, whose output
// is implementation-defined. Every method consumes a fixed number of engine
// words, so sequences are reproducible bit-for-bit across platforms and runs.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream)
      : eng_(mix64(mix64(seed) + 0x9e3779b97f4a7c15ULL * (stream + 1))) {}

  std::uint64_t u64() { return eng_(); }

  // Uniform on [0, 1), 53-bit mantissa.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Uniform on [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Standard normal via Box-Muller; consumes exactly two engine words.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log() finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double normal(double mu, double sigma) { return mu + sigma * normal(); }

  // Exponential with rate lambda (mean 1/lambda).
  double exponential(double lambda) {
    return -std::log1p(-uniform()) / lambda;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace lcdm
