#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace trisat {

/// Platform-independent random stream: std::mt19937_64, whose output sequence
/// is fixed by the standard, plus hand-rolled bounded draws (the standard
/// distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound), bound > 0. Rejection sampling on the
  /// top of the 64-bit range keeps it exact.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t r = engine_();
      if (r >= threshold) return r % bound;
    }
  }

  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Child seed for a path of indices below `base`: folds each index into the
/// state with splitmix64. Order-dependent, so (a, b) and (b, a) differ.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
  std::uint64_t state = splitmix64(base);
  for (std::uint64_t index : path) state = splitmix64(state ^ splitmix64(index + 1));
  return state;
}

}  // namespace trisat
