#pragma once

#include <cstdint>

namespace mblsim {

// Counter-based generator: every draw is a pure function of (key, counter),
// so any realization or site can be regenerated in isolation and the result
// does not depend on evaluation order. Mixing is the splitmix64 finalizer
// applied to the keyed counter word.

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t counter_rng(std::uint64_t key, std::uint64_t counter) {
  return mix64(mix64(key) ^ mix64(counter));
}

// 53-bit uniform in [0, 1).
inline double uniform01(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Per-realization seed derived from the ensemble master seed.
inline std::uint64_t realization_seed(std::uint64_t master_seed,
                                      std::uint64_t realization_index) {
  return counter_rng(master_seed, realization_index);
}

}  // namespace mblsim
