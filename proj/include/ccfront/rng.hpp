#pragma once

// Deterministic random streams. A 64-bit master seed plus a list of counters
// (replicate, purpose, point index, ...) is hashed through splitmix64 into an
// mt19937_64 stream; uniforms and normals are generated by fixed, documented
// recipes so output is bit-reproducible across platforms and thread counts.
//
// Derivation: h := master; then for each counter v, h := splitmix64(h ^ v).
// The stream is mt19937_64 seeded with the final h. Never reuse a (master,
// counters...) tuple for two different purposes.

#include <cstdint>
#include <random>

#include "ccfront/math.hpp"

namespace ccfront {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Stream purposes (stable numbering; part of the reproducibility contract).
enum class StreamPurpose : std::uint64_t {
  fixed_sample = 1,  // the certification scenario sample
  init = 2,          // scenario initializer draws + its subgradient loop
  scale = 3,         // smoothing-parameter scaling draws
  step_estimate = 4, // initial-step-length estimation
  point_run = 5,     // per-frontier-point stage/run batches and run lengths
  oracle = 6         // test-side oracles
};

class Rng {
 public:
  Rng() : Rng(0) {}
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng derive(std::uint64_t master, std::initializer_list<std::uint64_t> counters) {
    std::uint64_t h = master;
    for (std::uint64_t v : counters) h = splitmix64(h ^ v);
    return Rng(h);
  }

  std::uint64_t raw() { return engine_(); }

  // Uniform on (0, 1]: 53-bit mantissa, never exactly 0 (safe under log).
  double uniform() { return (double((engine_() >> 11)) + 1.0) * 0x1.0p-53; }

  // Uniform on [lo, hi].
  double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased integer on {lo, ..., hi} via 128-bit multiply rejection.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t range = hi - lo + 1;  // hi >= lo; full range not needed
    std::uint64_t x = engine_();
    __uint128_t m = (__uint128_t)x * (__uint128_t)range;
    std::uint64_t l = (std::uint64_t)m;
    if (l < range) {
      const std::uint64_t floor = (-range) % range;
      while (l < floor) {
        x = engine_();
        m = (__uint128_t)x * (__uint128_t)range;
        l = (std::uint64_t)m;
      }
    }
    return lo + (std::uint64_t)(m >> 64);
  }

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform(), u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  void fill_normal(Vec& v) {
    for (double& x : v) x = normal();
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace ccfront
