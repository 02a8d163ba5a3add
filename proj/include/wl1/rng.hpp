/**
 * Seeded, splittable random number generation for deterministic Monte Carlo.
 *
 * Every estimator in this library derives one generator per sample from
 * (master seed, stream name, sample index). Results therefore depend only on
 * the seed and the partition of the index space, never on thread scheduling:
 * integer statistics (counts) are identical for any worker count, and
 * floating-point accumulations are identical for a fixed (seed, workers) pair.
 *
 * Engine: xoshiro256++ seeded through splitmix64. Normal variates use the
 * Marsaglia polar method so no trigonometric calls are involved.
 */
#pragma once

#include <cstdint>
#include <cmath>
#include <string_view>
#include <vector>

namespace wl1 {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// FNV-1a over a label, used to give independent named substreams.
inline std::uint64_t streamTag(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Derives the seed of a named substream of `seed`.
inline std::uint64_t deriveStream(std::uint64_t seed, std::string_view name) {
  std::uint64_t s = seed ^ streamTag(name);
  return splitmix64(s);
}

inline std::uint64_t deriveStream(std::uint64_t seed, std::string_view name,
                                  std::uint64_t index) {
  std::uint64_t s = deriveStream(seed, name) + 0x9e3779b97f4a7c15ULL * (index + 1);
  return splitmix64(s);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  /// Generator for sample `index` of substream `stream` of `seed`.
  static Rng forSample(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * stream);
    s = splitmix64(s) + index;
    return Rng(splitmix64(s));
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via the polar method (no sin/cos).
  double normal() {
    if (hasSpare_) {
      hasSpare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double mul = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * mul;
    hasSpare_ = true;
    return u * mul;
  }

  /// Index drawn from the categorical distribution with the given cumulative
  /// weights (cumulative.back() == 1 up to rounding).
  std::size_t categorical(const std::vector<double>& cumulative) {
    const double u = uniform();
    std::size_t lo = 0, hi = cumulative.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (u < cumulative[mid]) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    return lo;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool hasSpare_ = false;
};

}  // namespace wl1
