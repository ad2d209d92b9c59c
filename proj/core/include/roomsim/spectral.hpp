// Copyright 2026 The roomsim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ROOMSIM_SPECTRAL_HPP
#define ROOMSIM_SPECTRAL_HPP

#include <string>
#include <vector>

#include "roomsim/rir.hpp"
#include "roomsim/scene.hpp"

namespace roomsim {

// Per-band amplitude attenuation of air in nepers per meter.
struct AirAttenuation {
  std::vector<double> gamma;
};

// Looks up atmospheric attenuation for the given conditions from an embedded
// table (dB/m at the seven standard band centers, temperature grid
// {10,20,30} C, humidity grid {30,50,70} %), bilinearly interpolated and
// converted to nepers/m. Conditions outside the grid are clamped; when
// `warning` is non-null a note is written to it.
AirAttenuation air_gamma(const EnvSpec& env,
                         const std::vector<double>& band_centers,
                         std::string* warning = nullptr);

// Amplitude-domain air absorption: a[i] *= exp(-gamma * r[i]).
void apply_air_absorption(std::vector<double>& amplitudes,
                          const std::vector<double>& distances, double gamma);

struct FilterBank {
  std::vector<std::vector<double>> filters;  // symmetric FIR taps per band
  std::vector<double> centers;               // Hz, one per kept band
  int fft_size = 512;
  int group_delay = 0;       // samples, identical across filters
  std::string warning;       // non-empty if bands were dropped
};

// Linear-phase FIR bank on a 512-point design grid with raised-cosine
// crossfades between adjacent centers (log-frequency), edges at geometric
// midpoints. The lowest band extends to DC and the highest to Fs/2, so the
// bank sums to a unit impulse. Centers above Fs/2 are dropped with a warning.
FilterBank design_bank(double fs, const std::vector<double>& centers);

// Filters each band RIR with its bank filter and sums. Output length is
// input length + filter length - 1; the filters' group delay is compensated
// so the direct path stays at its physical sample.
Rir merge_bands(const std::vector<Rir>& band_rirs, const FilterBank& bank);

// Magnitude response of one filter at the given frequency.
double filter_response_db(const std::vector<double>& taps, double fs,
                          double freq_hz);

}  // namespace roomsim

#endif  // ROOMSIM_SPECTRAL_HPP
