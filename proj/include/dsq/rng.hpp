#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace dsq {

// splitmix64 finalizer. Good avalanche, used for seeding and for deriving
// independent sub-streams from a master seed.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives the seed of sub-stream `stream` from a master seed. Sub-streams
// are statistically independent, so per-step or per-trajectory work can be
// scheduled in any order (or in parallel) without changing the results.
inline std::uint64_t derive_subseed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed + 0x9e3779b97f4a7c15ULL * (stream + 1));
}

// xoshiro256++ with splitmix64 seeding. Hand-rolled (no std:: distributions)
// so sampled values are bit-identical across standard libraries and across
// any degree of parallelism.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) {
      sm += 0x9e3779b97f4a7c15ULL;
      word = mix64(sm);
    }
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

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform on the open interval (0, 1); safe under log().
  double uniform_open() {
    return (static_cast<double>(next() >> 12) + 0.5) * 0x1.0p-52;
  }

  // Standard normal via Box-Muller; the spare value is cached.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_open()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  // Exponential inter-arrival time with intensity `rate` > 0.
  double exponential(double rate) { return -std::log(uniform_open()) / rate; }

  // Uniform integer in [0, bound) by rejection; bound >= 1.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % bound;
    std::uint64_t draw;
    do {
      draw = next();
    } while (draw >= limit);
    return draw % bound;
  }

  // Fisher-Yates shuffle of 0..n-1.
  std::vector<int> permutation(int n) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[idx(i)] = i;
    for (int i = n - 1; i > 0; --i) {
      const auto j = static_cast<int>(below(static_cast<std::uint64_t>(i) + 1));
      std::swap(perm[idx(i)], perm[idx(j)]);
    }
    return perm;
  }

 private:
  static std::size_t idx(int i) { return static_cast<std::size_t>(i); }
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4]{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace dsq
