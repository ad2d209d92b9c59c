// Copyright 2026 The roomsim authors
// SPDX-License-Identifier: Apache-2.0

#include "roomsim/raytracer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "roomsim/error.hpp"
#include "roomsim/rng.hpp"

namespace roomsim {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Rays per work block. Blocks accumulate private histograms merged in block
// order, so results are bit-identical for any thread count.
constexpr std::uint64_t kBlockSize = 8192;
constexpr int kMaxBounces = 1000000;

struct BandState {
  double energy;  // relative to the ray's initial energy
};

struct BlockAccumulator {
  std::vector<std::vector<double>> bins;  // [band][bin]
  std::vector<double> detected;
  std::vector<double> rain;

  BlockAccumulator(int n_bands, int n_bins)
      : bins(n_bands, std::vector<double>(n_bins, 0.0)),
        detected(n_bands, 0.0),
        rain(n_bands, 0.0) {}
};

struct TraceContext {
  Vec3 dims;
  Vec3 source;
  Vec3 recv;
  double radius = 0.5;
  int n_bands = 1;
  const SurfaceCoeffs* coeffs = nullptr;
  std::vector<double> gamma;  // nepers/m, zero-filled if air is off
  double c = 343.4;
  double max_time = 1.0;
  double bin_width = 0.004;
  int n_bins = 0;
  int min_specular_order = -1;
  double energy_threshold = 1e-7;
  double inv_n_rays = 0.0;
  double deposit_scale = 0.0;  // 1 / (4 pi^2 radius^2), RIR energy units
  std::uint64_t seed = 0;
};

// Distance along dir to the nearest wall plane, and which walls are hit.
// Corner hits reflect every coincident axis.
double next_wall_hit(const Vec3& pos, const Vec3& dir, const Vec3& dims,
                     bool hit_axis[3]) {
  double best = std::numeric_limits<double>::infinity();
  double t[3];
  for (int d = 0; d < 3; ++d) {
    t[d] = std::numeric_limits<double>::infinity();
    if (dir[d] > 1e-15) {
      t[d] = (dims[d] - pos[d]) / dir[d];
    } else if (dir[d] < -1e-15) {
      t[d] = -pos[d] / dir[d];
    }
    if (t[d] < best) best = t[d];
  }
  for (int d = 0; d < 3; ++d) hit_axis[d] = (t[d] - best) < 1e-12;
  return best;
}

void trace_one_ray(const TraceContext& ctx, std::uint64_t ray_index,
                   BlockAccumulator& acc) {
  SplitMix64 rng(mix_seed(ctx.seed, ray_index));
  Vec3 dir = uniform_sphere(rng);
  Vec3 pos = ctx.source;
  double path_len = 0.0;
  int bounces = 0;
  const int nb = ctx.n_bands;
  double energy[16];
  for (int b = 0; b < nb; ++b) energy[b] = 1.0;

  for (int step = 0; step < kMaxBounces; ++step) {
    bool hit_axis[3];
    const double t_hit = next_wall_hit(pos, dir, ctx.dims, hit_axis);
    if (!std::isfinite(t_hit)) return;  // degenerate direction

    // Specular receiver crossing within this segment. The deposit weight is
    // the inverse of the crossing probability for a point source at the
    // crossing's path length R, (1 - sqrt(1 - (radius/R)^2)) / 2, times the
    // free-field energy (4 pi R)^-2, so the expected direct-path energy
    // equals the image-source value exactly.
    if (bounces > ctx.min_specular_order) {
      const Vec3 w = ctx.recv - pos;
      const double u = w.dot(dir);
      if (u > 0.0 && u < t_hit) {
        const double d2 = w.dot(w) - u * u;
        if (d2 < ctx.radius * ctx.radius) {
          const double r_total = path_len + u;
          const int bin = static_cast<int>(r_total / ctx.c / ctx.bin_width);
          if (bin < ctx.n_bins) {
            const double r_eff = std::max(r_total, ctx.radius);
            const double x2 = (ctx.radius / r_eff) * (ctx.radius / r_eff);
            const double p_cross =
                0.5 * x2 / (1.0 + std::sqrt(std::max(0.0, 1.0 - x2)));
            const double weight =
                1.0 / (16.0 * kPi * kPi * r_eff * r_eff * p_cross);
            for (int b = 0; b < nb; ++b) {
              const double e = energy[b] * ctx.inv_n_rays *
                               std::exp(-2.0 * ctx.gamma[b] * r_total);
              acc.bins[b][bin] += e * weight;
              acc.detected[b] += e;
            }
          }
        }
      }
    }

    const Vec3 q = pos + t_hit * dir;  // reflection point
    path_len += t_hit;
    if (path_len / ctx.c > ctx.max_time) return;

    // Wall index of the primary hit axis: 2*axis + side.
    int wall = -1;
    for (int d = 0; d < 3; ++d) {
      if (hit_axis[d]) {
        wall = 2 * d + (dir[d] > 0.0 ? 1 : 0);
        break;
      }
    }

    // Diffuse rain toward the receiver.
    const double d_recv = distance(q, ctx.recv);
    const double hit_prob =
        d_recv <= ctx.radius
            ? 1.0
            : 1.0 - std::sqrt(1.0 - (ctx.radius / d_recv) * (ctx.radius / d_recv));
    const double r_rain = path_len + d_recv;
    const int rain_bin = static_cast<int>(r_rain / ctx.c / ctx.bin_width);
    for (int b = 0; b < nb; ++b) {
      const double alpha = ctx.coeffs->absorption[wall][b];
      const double s = ctx.coeffs->scattering[wall][b];
      if (s > 0.0 && rain_bin < ctx.n_bins) {
        const double e_scat = energy[b] * (1.0 - alpha) * s * hit_prob *
                              ctx.inv_n_rays *
                              std::exp(-2.0 * ctx.gamma[b] * r_rain);
        acc.bins[b][rain_bin] += e_scat * ctx.deposit_scale;
        acc.detected[b] += e_scat;
        acc.rain[b] += e_scat;
      }
      energy[b] *= (1.0 - alpha) * (1.0 - s);
    }

    double max_energy = 0.0;
    for (int b = 0; b < nb; ++b) max_energy = std::max(max_energy, energy[b]);
    if (max_energy < ctx.energy_threshold) return;

    for (int d = 0; d < 3; ++d) {
      if (hit_axis[d]) dir[d] = -dir[d];
    }
    pos = q;
    // Pin the reflected position onto the wall plane to avoid drift.
    for (int d = 0; d < 3; ++d) {
      if (!hit_axis[d]) continue;
      pos[d] = (dir[d] > 0.0) ? std::min(pos[d], ctx.dims[d]) : std::max(pos[d], 0.0);
    }
    ++bounces;
  }
}

}  // namespace

double p_hit(const Vec3& reflection_point, const ReceiverSpec& receiver) {
  const double d = distance(reflection_point, receiver.position);
  if (d <= receiver.radius) return 1.0;
  const double ratio = receiver.radius / d;
  return 1.0 - std::sqrt(1.0 - ratio * ratio);
}

EnergyHistogram trace(const RoomSpec& room, const SourceSpec& source,
                      const ReceiverSpec& receiver,
                      const SurfaceCoeffs& coeffs, const AirAttenuation* air,
                      const TraceConfig& config) {
  if (config.n_rays < 1)
    throw Error(ErrorKind::Config, "trace: n_rays must be >= 1");
  if (coeffs.n_bands > 16)
    throw Error(ErrorKind::Config, "trace: too many bands");
  if (air && static_cast<int>(air->gamma.size()) != coeffs.n_bands)
    throw Error(ErrorKind::Config, "trace: air attenuation band count mismatch");

  TraceContext ctx;
  ctx.dims = room.dimensions;
  ctx.source = source.position;
  ctx.recv = receiver.position;
  ctx.radius = receiver.radius;
  ctx.n_bands = coeffs.n_bands;
  ctx.coeffs = &coeffs;
  ctx.gamma = air ? air->gamma : std::vector<double>(coeffs.n_bands, 0.0);
  ctx.c = speed_of_sound(room.environment);
  ctx.bin_width = config.bin_width;
  ctx.min_specular_order = config.min_specular_order;
  ctx.energy_threshold = config.energy_threshold;
  ctx.inv_n_rays = 1.0 / static_cast<double>(config.n_rays);
  ctx.deposit_scale = 1.0 / (4.0 * kPi * kPi * ctx.radius * ctx.radius);
  ctx.seed = config.rng_seed;

  double max_time = config.max_time;
  if (max_time <= 0.0) {
    const double rt60 =
        eyring_rt60(room.volume(), room.surface_area(), mean_absorption(room, coeffs));
    max_time = std::max(2.0 * rt60, 0.3);
  }
  ctx.max_time = max_time;
  ctx.n_bins = static_cast<int>(std::ceil(max_time / config.bin_width));

  const std::uint64_t n_blocks = (config.n_rays + kBlockSize - 1) / kBlockSize;
  std::vector<BlockAccumulator> blocks(
      n_blocks, BlockAccumulator(ctx.n_bands, ctx.n_bins));

  unsigned hw = std::thread::hardware_concurrency();
  unsigned n_threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                          : (hw > 0 ? hw : 1);
  n_threads = std::min<std::uint64_t>(n_threads, n_blocks);

  std::atomic<std::uint64_t> next_block{0};
  auto worker = [&]() {
    for (;;) {
      const std::uint64_t blk = next_block.fetch_add(1);
      if (blk >= n_blocks) return;
      const std::uint64_t lo = blk * kBlockSize;
      const std::uint64_t hi = std::min(lo + kBlockSize, config.n_rays);
      for (std::uint64_t i = lo; i < hi; ++i)
        trace_one_ray(ctx, i, blocks[blk]);
    }
  };
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  EnergyHistogram hist;
  hist.bin_width = config.bin_width;
  hist.bins.assign(ctx.n_bands, std::vector<double>(ctx.n_bins, 0.0));
  hist.detected_energy.assign(ctx.n_bands, 0.0);
  hist.rain_energy.assign(ctx.n_bands, 0.0);
  hist.emitted_energy.assign(ctx.n_bands, 1.0);
  // Merge in block-index order: a fixed reduction tree.
  for (const BlockAccumulator& blk : blocks) {
    for (int b = 0; b < ctx.n_bands; ++b) {
      for (int i = 0; i < ctx.n_bins; ++i) hist.bins[b][i] += blk.bins[b][i];
      hist.detected_energy[b] += blk.detected[b];
      hist.rain_energy[b] += blk.rain[b];
    }
  }

  for (int b = 0; b < ctx.n_bands; ++b) {
    if (hist.detected_energy[b] > hist.emitted_energy[b] + 1e-12)
      throw Error(ErrorKind::Simulation,
                  "energy conservation violated: detected exceeds emitted");
  }
  return hist;
}

std::vector<Rir> histogram_to_rir(const EnergyHistogram& hist,
                                  double room_volume, double fs,
                                  std::uint64_t rng_seed,
                                  double speed_of_sound) {
  const int n_bands = hist.n_bands();
  const int n_bins = hist.n_bins();
  std::vector<Rir> out(std::max(n_bands, 0));
  for (int b = 0; b < n_bands; ++b) {
    out[b].fs = fs;
    out[b].meta.method = "srt";
    out[b].meta.seed = rng_seed;
    out[b].meta.bands = n_bands;
  }
  if (n_bands == 0 || n_bins == 0) return out;

  const int length = static_cast<int>(std::llround(n_bins * hist.bin_width * fs));
  auto bin_of = [&](int n) {
    return std::min(static_cast<int>(n / fs / hist.bin_width), n_bins - 1);
  };

  // Poisson-process dirac times with the quadratic echo-density rate, shared
  // across bands so the merged bands stay coherent.
  std::mt19937_64 gen(rng_seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<signed char> sign(length, 0);
  std::vector<int> count(n_bins, 0);
  const double rate_coeff =
      4.0 * kPi * speed_of_sound * speed_of_sound * speed_of_sound / room_volume;
  for (int n = 0; n < length; ++n) {
    const double t = n / fs;
    const double p = std::min(rate_coeff * t * t, fs) / fs;
    if (uni(gen) < p) {
      sign[n] = uni(gen) < 0.5 ? -1 : 1;
      ++count[bin_of(n)];
    }
  }
  // A bin holding energy but no dirac gets one at its center.
  for (int bin = 0; bin < n_bins; ++bin) {
    if (count[bin] > 0) continue;
    double e_max = 0.0;
    for (int b = 0; b < n_bands; ++b) e_max = std::max(e_max, hist.bins[b][bin]);
    if (e_max <= 0.0) continue;
    const int n = std::min(
        static_cast<int>(std::llround((bin + 0.5) * hist.bin_width * fs)),
        length - 1);
    if (sign[n] == 0) {
      sign[n] = uni(gen) < 0.5 ? -1 : 1;
      count[bin] = 1;
    }
  }

  for (int b = 0; b < n_bands; ++b) {
    out[b].samples.assign(length, 0.0);
    std::vector<double> amp(n_bins, 0.0);
    for (int bin = 0; bin < n_bins; ++bin) {
      if (count[bin] > 0 && hist.bins[b][bin] > 0.0)
        amp[bin] = std::sqrt(hist.bins[b][bin] / count[bin]);
    }
    for (int n = 0; n < length; ++n) {
      if (sign[n] == 0) continue;
      out[b].samples[n] = sign[n] * amp[bin_of(n)];
    }
  }
  return out;
}

}  // namespace roomsim
