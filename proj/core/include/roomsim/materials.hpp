// Copyright 2026 The roomsim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ROOMSIM_MATERIALS_HPP
#define ROOMSIM_MATERIALS_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

#include "roomsim/scene.hpp"

namespace roomsim {

struct BandScheme {
  std::vector<double> center_frequencies;  // Hz, strictly increasing
};

// Seven-band scheme centered at 125..8000 Hz.
const BandScheme& default_band_scheme();

struct Material {
  std::string name;
  std::vector<double> absorption;  // per band
  std::vector<double> scattering;  // per band; empty = unspecified
  std::string source;              // citation for the coefficients
};

class MaterialDb {
 public:
  static MaterialDb load(const std::string& path);
  static MaterialDb load_text(const std::string& text);

  const Material& lookup(const std::string& name) const;
  bool contains(const std::string& name) const;
  std::vector<std::string> names() const;
  int band_count() const { return band_count_; }

 private:
  std::map<std::string, Material> materials_;
  int band_count_ = 7;
};

// Eyring inversion: mean absorption required for a target reverberation time.
// alpha = 1 - exp(-0.161 V / (S rt60)), clamped to (0, 1).
double eyring_absorption(double volume, double surface_area, double rt60);

// Forward Eyring estimate, used for default ray-tracing time limits.
double eyring_rt60(double volume, double surface_area, double mean_alpha);

// Per-surface, per-band coefficients with material references resolved.
struct SurfaceCoeffs {
  int n_bands = 1;
  std::array<std::vector<double>, 6> absorption;
  std::array<std::vector<double>, 6> scattering;
};

// multiband=false collapses materials to their 1 kHz band.
SurfaceCoeffs resolve_surface_coeffs(const RoomSpec& room, const MaterialDb* db,
                                     bool multiband);

// Mean absorption over surfaces (area-weighted) for band 0; drives the
// default SRT time limit.
double mean_absorption(const RoomSpec& room, const SurfaceCoeffs& coeffs);

}  // namespace roomsim

#endif  // ROOMSIM_MATERIALS_HPP
