// Copyright 2026 The roomsim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ROOMSIM_RNG_HPP
#define ROOMSIM_RNG_HPP

#include <cstdint>

#include "roomsim/vec.hpp"

namespace roomsim {

// splitmix64: tiny, well-mixed generator. Each ray gets its own stream keyed
// by (global seed, ray index) so results do not depend on thread scheduling.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_double() { return (next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 s(seed ^ (0x632be59bd9b4e019ULL + index * 0x9e3779b97f4a7c15ULL));
  return s.next();
}

// Uniform direction on the unit sphere.
inline Vec3 uniform_sphere(SplitMix64& rng) {
  double z = 2.0 * rng.next_double() - 1.0;
  double phi = 6.283185307179586476925286766559 * rng.next_double();
  double r = std::sqrt(1.0 - z * z);
  return {r * std::cos(phi), r * std::sin(phi), z};
}

}  // namespace roomsim

#endif  // ROOMSIM_RNG_HPP
