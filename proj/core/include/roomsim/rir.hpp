// Copyright 2026 The roomsim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ROOMSIM_RIR_HPP
#define ROOMSIM_RIR_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace roomsim {

struct RirMetadata {
  std::string method;  // "ism", "srt", or "hybrid"
  std::uint64_t seed = 0;
  int bands = 1;
  std::uint64_t config_hash = 0;
};

// Sampled impulse response at rate fs.
struct Rir {
  std::vector<double> samples;
  double fs = 16000.0;
  RirMetadata meta;

  double energy() const {
    double e = 0.0;
    for (double s : samples) e += s * s;
    return e;
  }
};

}  // namespace roomsim

#endif  // ROOMSIM_RIR_HPP
