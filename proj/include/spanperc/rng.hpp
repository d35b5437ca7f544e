#pragma once

#include <cstdint>
#include <initializer_list>

#include "spanperc/vec.hpp"

namespace spanperc {

// Deterministic, platform-independent randomness. std:: distributions are
// not portable across standard libraries, so bounded ints and doubles are
// produced here directly. Streams are derived by hashing a base seed with
// a role tag and a payload (cell center, trial index, ...), which makes
// each cell / trial independent and resumable in any order.

inline std::uint64_t splitmix_scramble(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

inline std::uint64_t splitmix_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  return splitmix_scramble(state);
}

inline std::uint64_t mix(std::uint64_t h, std::uint64_t x) {
  h += 0x9E3779B97F4A7C15ULL;
  return splitmix_scramble(h ^ splitmix_scramble(x + 0x632BE59BD9B4E019ULL));
}

// Stream roles. Values are part of the reproducibility contract.
enum class StreamTag : std::uint64_t {
  kCell = 1,
  kTrial = 2,
  kForest = 3,
  kThin = 4,
  kLambda = 5,
  kInstance = 6,
  kBootstrap = 7,
};

inline std::uint64_t derive(std::uint64_t seed, StreamTag tag) {
  return mix(seed, static_cast<std::uint64_t>(tag));
}

inline std::uint64_t derive(std::uint64_t seed, StreamTag tag,
                            std::uint64_t payload) {
  return mix(derive(seed, tag), payload);
}

template <int D>
inline std::uint64_t derive_cell(std::uint64_t seed, const Vec<D>& z) {
  std::uint64_t h = derive(seed, StreamTag::kCell);
  for (int i = 0; i < D; ++i)
    h = mix(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(z[i])));
  return h;
}

// xoshiro256++ (Blackman/Vigna reference construction).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix_next(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Unbiased uniform draw from [0, n) by rejection (Lemire).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    while (true) {
      std::uint64_t x = next();
      __uint128_t m = static_cast<__uint128_t>(x) * n;
      std::uint64_t lo = static_cast<std::uint64_t>(m);
      if (lo >= n || lo >= (-n) % n) return static_cast<std::uint64_t>(m >> 64);
    }
  }

  // Uniform in [0, 1), 53 mantissa bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

}  // namespace spanperc
