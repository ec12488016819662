#pragma once

#include <cstdint>

namespace swbin {

// splitmix64 finalizer; the workhorse of all counter-based randomness here.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stateless hash of (seed, stream, counter). Disjoint streams give
// independent, reproducible randomness regardless of evaluation order.
inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t counter) {
  return mix64(mix64(mix64(seed) ^ stream) ^ counter);
}

// Uniform in [0, 1) from 53 high bits.
inline double to_unit(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Unbiased-enough bin index (multiply-shift; bias < M / 2^64).
inline std::uint64_t to_bin(std::uint64_t h, std::uint64_t m) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(h) * m) >> 64);
}

// Small sequential generator seeded from a counter hash.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t state) : state_(state) {}
  std::uint64_t next() { return mix64(state_++); }
  double next_unit() { return to_unit(next()); }

 private:
  std::uint64_t state_;
};

}  // namespace swbin
