#pragma once

#include <cstdint>
#include <random>

namespace revosim {

// splitmix64 finalizer; used both for stream derivation and keyed hashing.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

// Deterministic random stream. All draws go through explicit helpers so a
// given seed yields the same sequence on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(mix64(seed)) {}

  std::uint64_t next() { return gen_(); }

  // Uniform integer in [0, n), unbiased via rejection.
  int below(int n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % static_cast<std::uint64_t>(n);
    std::uint64_t r;
    do { r = gen_(); } while (r >= limit);
    return static_cast<int>(r % static_cast<std::uint64_t>(n));
  }

  // Uniform in (0, 1).
  double unit() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1p-53;
  }

  // Derive an independent substream.
  Rng fork(std::uint64_t tag) { return Rng(hash_combine(gen_(), tag)); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace revosim
