// Copyright 2026 The roomsim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ROOMSIM_RENDER_HPP
#define ROOMSIM_RENDER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "roomsim/materials.hpp"
#include "roomsim/rir.hpp"
#include "roomsim/scene.hpp"

namespace roomsim {

enum class Method { ISM, SRT, HYBRID };
enum class BandMode { Single, Multi };

std::string method_name(Method m);
Method parse_method(const std::string& name);

struct SimConfig {
  Method method = Method::HYBRID;
  int ism_order = 17;
  std::uint64_t n_rays = 100000;
  std::uint64_t rng_seed = 0;
  bool air = false;   // atmospheric absorption
  bool mat = false;   // frequency-dependent materials (requires Multi)
  BandMode band_mode = BandMode::Single;
  double bin_width = 0.004;
  double max_time = 0.0;  // 0 = auto
  int threads = 0;

  void validate() const;        // throws Error(Config)
  // Stable digest of every field that affects simulation output. The thread
  // count is excluded: results are identical for any thread count.
  std::uint64_t hash() const;
};

// Full pipeline for one source/receiver pair: per-band ISM and/or ray-traced
// components, air absorption, band merge.
Rir simulate_rir(const RoomSpec& room, int source_index, int receiver_index,
                 const MaterialDb* db, const SimConfig& config);

struct AudioBuffer {
  std::vector<double> samples;
  double fs = 16000.0;
};

struct NoiseInput {
  AudioBuffer audio;
  int source_index = 0;
  double snr_db = 0.0;
};

struct MixSpec {
  AudioBuffer target;
  int target_source = 0;
  std::vector<NoiseInput> noises;
};

// Far-field mixer: target convolved at unit gain, each noise convolved and
// scaled to its requested SNR (powers measured over the target's active
// extent), summed. Peak-normalizes to -1 dBFS only if the sum would clip.
AudioBuffer mix_scene(const std::vector<Rir>& rir_per_source,
                      const MixSpec& mix);

std::vector<double> convolve(const std::vector<double>& a,
                             const std::vector<double>& b);

}  // namespace roomsim

#endif  // ROOMSIM_RENDER_HPP
