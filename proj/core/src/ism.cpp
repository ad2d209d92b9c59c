// Copyright 2026 The roomsim authors
// SPDX-License-Identifier: Apache-2.0

#include "roomsim/ism.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "roomsim/error.hpp"

namespace roomsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Per-crossing amplitude factors raised to small integer powers; tables keep
// the hot loop free of pow().
struct GainTables {
  // [surface][band][crossings]
  std::vector<std::vector<std::vector<double>>> powers;

  GainTables(const SurfaceCoeffs& coeffs, bool scattering_loss, int max_count) {
    powers.resize(6);
    for (int srf = 0; srf < 6; ++srf) {
      powers[srf].resize(coeffs.n_bands);
      for (int b = 0; b < coeffs.n_bands; ++b) {
        double base = std::sqrt(1.0 - coeffs.absorption[srf][b]);
        if (scattering_loss) base *= std::sqrt(1.0 - coeffs.scattering[srf][b]);
        auto& row = powers[srf][b];
        row.resize(max_count + 1);
        row[0] = 1.0;
        for (int k = 1; k <= max_count; ++k) row[k] = row[k - 1] * base;
      }
    }
  }
};

// Crossing counts of the two walls bounding one axis for lattice index m.
// Truncating division matches physical plane-crossing counts.
inline void wall_crossings(int m, int& lo, int& hi) {
  if (m > 0) {
    lo = m / 2;
    hi = (m + 1) / 2;
  } else {
    lo = std::abs((m - 1) / 2);
    hi = std::abs(m / 2);
  }
}

}  // namespace

double delay_kernel(double x) {
  if (std::fabs(x) > kDelayKernelHalfWidth) return 0.0;
  double window = 0.5 * (1.0 + std::cos(kPi * x / (kDelayKernelHalfWidth + 1)));
  if (std::fabs(x) < 1e-10) return window;
  return window * std::sin(kPi * x) / (kPi * x);
}

std::uint64_t image_count(int order) {
  std::uint64_t m = order;
  return (2 * m + 1) * (2 * m * m + 2 * m + 3) / 3;
}

std::vector<ImageSource> enumerate_images(const RoomSpec& room,
                                          const SourceSpec& source,
                                          int order,
                                          const SurfaceCoeffs& coeffs,
                                          bool scattering_loss) {
  if (order < 0) throw Error(ErrorKind::Config, "ism order must be >= 0");
  const Vec3& L = room.dimensions;
  const Vec3& s = source.position;
  const int n_bands = coeffs.n_bands;
  GainTables tables(coeffs, scattering_loss, order / 2 + 1);

  std::vector<ImageSource> images;
  images.reserve(image_count(order));
  for (int i = -order; i <= order; ++i) {
    const int rj = order - std::abs(i);
    for (int j = -rj; j <= rj; ++j) {
      const int rk = rj - std::abs(j);
      for (int k = -rk; k <= rk; ++k) {
        const int idx[3] = {i, j, k};
        ImageSource img;
        img.order = std::abs(i) + std::abs(j) + std::abs(k);
        img.reflection_gain.assign(n_bands, 1.0);
        for (int d = 0; d < 3; ++d) {
          const int m = idx[d];
          const double step = (std::abs(m) % 2 == 1) ? L[d] - s[d] : s[d];
          img.position[d] = m * L[d] + step;
          int lo, hi;
          wall_crossings(m, lo, hi);
          for (int b = 0; b < n_bands; ++b) {
            img.reflection_gain[b] *=
                tables.powers[2 * d][b][lo] * tables.powers[2 * d + 1][b][hi];
          }
        }
        images.push_back(std::move(img));
      }
    }
  }
  return images;
}

std::vector<Rir> ism_rir(const RoomSpec& room, const SourceSpec& source,
                         const ReceiverSpec& receiver,
                         const SurfaceCoeffs& coeffs, const IsmOptions& opt) {
  const double fs = room.environment.sample_rate;
  const double c = speed_of_sound(room.environment);
  const int n_bands = coeffs.n_bands;
  if (opt.air && static_cast<int>(opt.air->gamma.size()) != n_bands)
    throw Error(ErrorKind::Config, "air attenuation band count mismatch");

  std::vector<ImageSource> images =
      enumerate_images(room, source, opt.order, coeffs, opt.scattering_loss);

  double max_dist = 0.0;
  for (const ImageSource& img : images) {
    double r = distance(img.position, receiver.position);
    if (r < 1e-6)
      throw Error(ErrorKind::Geometry,
                  "receiver coincides with an image source (degenerate geometry)");
    max_dist = std::max(max_dist, r);
  }
  const int length =
      static_cast<int>(std::ceil(max_dist / c * fs)) + kDelayKernelHalfWidth + 2;

  std::vector<Rir> out(n_bands);
  for (int b = 0; b < n_bands; ++b) {
    out[b].samples.assign(length, 0.0);
    out[b].fs = fs;
    out[b].meta.method = "ism";
    out[b].meta.bands = n_bands;
  }

  double kernel[2 * kDelayKernelHalfWidth + 1];
  for (const ImageSource& img : images) {
    const double r = distance(img.position, receiver.position);
    const double delay = r / c * fs;
    const double spread = 1.0 / (4.0 * kPi * r);
    const int center = static_cast<int>(std::llround(delay));
    const int first = center - kDelayKernelHalfWidth;
    const int t0 = std::max(0, -first);  // clip taps that land before t = 0
    const int t1 = std::min(2 * kDelayKernelHalfWidth, length - 1 - first);
    for (int t = t0; t <= t1; ++t) kernel[t] = delay_kernel(first + t - delay);
    for (int b = 0; b < n_bands; ++b) {
      double g = img.reflection_gain[b] * spread;
      if (opt.air) g *= std::exp(-opt.air->gamma[b] * r);
      if (g == 0.0) continue;
      double* h = out[b].samples.data() + first;
      for (int t = t0; t <= t1; ++t) h[t] += g * kernel[t];
    }
  }
  return out;
}

}  // namespace roomsim
