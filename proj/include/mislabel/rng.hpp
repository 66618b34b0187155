#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace mislabel {

// Seed derivation for reproducible substreams. A master seed is combined
// with a purpose tag (and optional indices) to produce an independent
// child seed, so that any piece of work (one run, one fold, one restart)
// can be replayed in isolation and parallel execution cannot change
// results.
namespace seed {

// SplitMix64 finalizer.
inline std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive(std::uint64_t parent, std::uint64_t tag) {
  return mix(parent ^ mix(tag));
}

inline std::uint64_t derive(std::uint64_t parent, std::uint64_t tag,
                            std::uint64_t index) {
  return derive(derive(parent, tag), index);
}

inline std::uint64_t derive(std::uint64_t parent, std::uint64_t tag,
                            std::uint64_t i, std::uint64_t j) {
  return derive(derive(derive(parent, tag), i), j);
}

// Purpose tags. Values are arbitrary but fixed; changing them changes
// every derived stream.
inline constexpr std::uint64_t kRun = 0x01;
inline constexpr std::uint64_t kSplit = 0x02;
inline constexpr std::uint64_t kNoise = 0x03;
inline constexpr std::uint64_t kFolds = 0x04;
inline constexpr std::uint64_t kDetector = 0x05;
inline constexpr std::uint64_t kFinalLearner = 0x06;
inline constexpr std::uint64_t kRestart = 0x07;
inline constexpr std::uint64_t kClass = 0x08;
inline constexpr std::uint64_t kSynthetic = 0x09;

}  // namespace seed

// Deterministic generator built on xoshiro256**. The standard <random>
// distributions are implementation-defined, so all draws needed by the
// library are provided here with a fixed algorithm; results are identical
// across platforms and across serial/parallel execution.
class Rng {
 public:
  explicit Rng(std::uint64_t s) {
    // Expand the seed into four nonzero words.
    for (auto& w : state_) {
      s = seed::mix(s);
      w = s;
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n), unbiased (rejection sampling).
  std::size_t next_below(std::size_t n) {
    if (n <= 1) return 0;
    const std::uint64_t bound = n;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return static_cast<std::size_t>(v % bound);
  }

  // Standard normal via Box-Muller (cosine branch only).
  double next_gaussian() {
    double u1;
    do {
      u1 = next_unit();
    } while (u1 <= 0.0);
    const double u2 = next_unit();
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  // Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[next_below(i)]);
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

}  // namespace mislabel
