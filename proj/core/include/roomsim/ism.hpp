// Copyright 2026 The roomsim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ROOMSIM_ISM_HPP
#define ROOMSIM_ISM_HPP

#include <vector>

#include "roomsim/materials.hpp"
#include "roomsim/rir.hpp"
#include "roomsim/scene.hpp"
#include "roomsim/spectral.hpp"
#include "roomsim/vec.hpp"

namespace roomsim {

struct ImageSource {
  Vec3 position;
  int order = 0;                        // |i| + |j| + |k| of the lattice index
  std::vector<double> reflection_gain;  // per band, amplitude domain
};

struct IsmOptions {
  int order = 17;
  // Multiply per-crossing gain by sqrt(1 - s); used by the hybrid method so
  // the specular split matches the ray tracer's energy bookkeeping.
  bool scattering_loss = false;
  // Per-band air attenuation (nepers/m), or nullptr for lossless air.
  const AirAttenuation* air = nullptr;
};

// Windowed-sinc fractional-delay kernel: 81 taps, raised-cosine window.
inline constexpr int kDelayKernelHalfWidth = 40;
double delay_kernel(double x);

// Full image lattice {(i,j,k) : |i|+|j|+|k| <= order} with per-band gains
// accumulated over crossed walls (amplitude sqrt(1 - alpha) per crossing).
std::vector<ImageSource> enumerate_images(const RoomSpec& room,
                                          const SourceSpec& source,
                                          int order,
                                          const SurfaceCoeffs& coeffs,
                                          bool scattering_loss = false);

// Closed-form lattice size for a given order.
std::uint64_t image_count(int order);

// Per-band RIRs: h[n] = sum over images of R/(4 pi r) * kernel(n - fs r / c).
std::vector<Rir> ism_rir(const RoomSpec& room, const SourceSpec& source,
                         const ReceiverSpec& receiver,
                         const SurfaceCoeffs& coeffs, const IsmOptions& opt);

}  // namespace roomsim

#endif  // ROOMSIM_ISM_HPP
