#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

namespace hwsim {

/// Deterministic 64-bit PRNG (splitmix64). Hand-rolled so that sequences are
/// identical across platforms and standard-library implementations; std::
/// distributions are not reproducible across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9E3779B97F4A7C15ULL) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_double() < p; }

  /// Sample an index from unnormalized weights (linear CDF scan).
  int categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (total <= 0.0) throw std::runtime_error("categorical: no probability mass");
    double u = next_double() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      acc += weights[i];
      if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
  }

  /// Stream derivation: a stable hash of (master, ids...) seeds an independent
  /// generator, so e.g. group i's stream does not depend on how many groups ran
  /// before it or on which thread picked it up.
  static Rng derive(std::uint64_t master, std::uint64_t id1, std::uint64_t id2 = 0,
                    std::uint64_t id3 = 0) {
    std::uint64_t h = mix(master, 0xA0761D6478BD642FULL);
    h = mix(h, id1 + 0xE7037ED1A0B428DBULL);
    h = mix(h, id2 + 0x8EBC6AF09C88C6E3ULL);
    h = mix(h, id3 + 0x589965CC75374CC3ULL);
    return Rng(h);
  }

 private:
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace hwsim
