#pragma once

// SplitMix64: the one pseudo-random generator used everywhere in digitwise.
//
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
//
// Derived draws are spelled out so that other languages can reproduce them:
//   bounded(n)  = high 64 bits of the 128-bit product next() * n
//   uniform01() = (next() >> 11) * 2^-53
//   normal()    = Box-Muller on (u1, u2) = (1 - uniform01(), uniform01()),
//                 returning r*cos(2*pi*u2) first and caching r*sin(2*pi*u2)
// std::*_distribution is avoided because its output differs across standard
// library implementations.

#include <cstdint>
#include <initializer_list>
#include <optional>

namespace digitwise {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  std::uint64_t bounded(std::uint64_t n);
  double uniform01();
  double normal();

 private:
  std::uint64_t state_;
  std::optional<double> spare_;
};

// Seed for an independent stream: folds each key through one SplitMix64 step.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed,
                                        std::initializer_list<std::uint64_t> keys);

}  // namespace digitwise
