// Copyright 2026 The roomsim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ROOMSIM_AUDIO_HPP
#define ROOMSIM_AUDIO_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "roomsim/render.hpp"
#include "roomsim/rir.hpp"

namespace roomsim {

enum class WavFormat { Pcm16, Float32 };

struct WavData {
  std::vector<double> samples;
  double fs = 16000.0;
  WavFormat format = WavFormat::Float32;
};

// Single-channel WAV I/O. Pcm16 clips to [-1, 1) on write.
void write_wav(const std::string& path, const std::vector<double>& samples,
               double fs, WavFormat format);
WavData read_wav(const std::string& path);

// JSON sidecar next to a RIR file: method, seed, band count, config hash,
// sample rate, length. Deliberately timestamp-free so outputs are
// byte-reproducible.
void write_rir_sidecar(const std::string& wav_path, const Rir& rir);

std::uint64_t fnv1a64(std::string_view data);

}  // namespace roomsim

#endif  // ROOMSIM_AUDIO_HPP
