// Copyright 2026 The roomsim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ROOMSIM_RAYTRACER_HPP
#define ROOMSIM_RAYTRACER_HPP

#include <cstdint>
#include <vector>

#include "roomsim/materials.hpp"
#include "roomsim/rir.hpp"
#include "roomsim/scene.hpp"
#include "roomsim/spectral.hpp"
#include "roomsim/vec.hpp"

namespace roomsim {

struct TraceConfig {
  std::uint64_t n_rays = 100000;
  std::uint64_t rng_seed = 0;
  // Specular receiver crossings with bounce count <= this are discarded
  // (hybrid deduplication). -1 keeps everything.
  int min_specular_order = -1;
  double bin_width = 0.004;      // seconds
  double max_time = 0.0;         // seconds; 0 = 2x Eyring RT60, floored
  double energy_threshold = 1e-7;  // kill rays below threshold x initial
  int threads = 0;               // 0 = hardware concurrency
};

// Time-binned energy detected at the receiver. Bin values are in RIR energy
// units (sum of squared RIR samples over the bin); the *_energy tallies are
// physical fractions of the emitted unit energy, used for conservation
// checks.
struct EnergyHistogram {
  double bin_width = 0.004;
  std::vector<std::vector<double>> bins;  // [band][bin]
  std::vector<double> detected_energy;    // [band], physical units
  std::vector<double> rain_energy;        // [band], rain share of detected
  std::vector<double> emitted_energy;     // [band], 1.0 per band

  int n_bands() const { return static_cast<int>(bins.size()); }
  int n_bins() const { return bins.empty() ? 0 : static_cast<int>(bins[0].size()); }
};

// Fraction of a uniform hemisphere around the reflection point subtended by
// the receiver sphere: 1 - sqrt(1 - (r/d)^2), clamped to 1 when d < r.
double p_hit(const Vec3& reflection_point, const ReceiverSpec& receiver);

// Monte Carlo energy propagation with diffuse rain. Deterministic for a
// fixed (room, config) pair regardless of thread count.
EnergyHistogram trace(const RoomSpec& room, const SourceSpec& source,
                      const ReceiverSpec& receiver,
                      const SurfaceCoeffs& coeffs, const AirAttenuation* air,
                      const TraceConfig& config);

// Shapes per-band Poisson dirac trains to the histogram envelope. Arrival
// rate mu(t) = min(4 pi c^3 t^2 / V, fs); dirac times and signs are shared
// across bands.
std::vector<Rir> histogram_to_rir(const EnergyHistogram& hist,
                                  double room_volume, double fs,
                                  std::uint64_t rng_seed,
                                  double speed_of_sound);

}  // namespace roomsim

#endif  // ROOMSIM_RAYTRACER_HPP
