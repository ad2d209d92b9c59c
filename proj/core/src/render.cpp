// Copyright 2026 The roomsim authors
// SPDX-License-Identifier: Apache-2.0

#include "roomsim/render.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "roomsim/audio.hpp"
#include "roomsim/error.hpp"
#include "roomsim/ism.hpp"
#include "roomsim/raytracer.hpp"
#include "roomsim/spectral.hpp"

namespace roomsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * kPi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    for (auto& x : a) x /= static_cast<double>(n);
  }
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::ISM:
      return "ism";
    case Method::SRT:
      return "srt";
    case Method::HYBRID:
      return "hybrid";
  }
  return "hybrid";
}

Method parse_method(const std::string& name) {
  if (name == "ism") return Method::ISM;
  if (name == "srt") return Method::SRT;
  if (name == "hybrid") return Method::HYBRID;
  throw Error(ErrorKind::Config,
              "unknown method '" + name + "' (expected ism, srt, or hybrid)");
}

void SimConfig::validate() const {
  if (method != Method::SRT && (ism_order < 0 || ism_order > 40))
    throw Error(ErrorKind::Config, "ism_order must be in [0, 40]");
  if (method != Method::ISM && n_rays < 1)
    throw Error(ErrorKind::Config, "n_rays must be >= 1");
  if (mat && band_mode != BandMode::Multi)
    throw Error(ErrorKind::Config,
                "frequency-dependent materials require multiband rendering");
  if (bin_width <= 0.0)
    throw Error(ErrorKind::Config, "bin_width must be positive");
  if (max_time < 0.0)
    throw Error(ErrorKind::Config, "max_time must be >= 0");
  if (threads < 0)
    throw Error(ErrorKind::Config, "threads must be >= 0");
}

std::uint64_t SimConfig::hash() const {
  std::ostringstream os;
  os << "method=" << method_name(method) << ";order=" << ism_order
     << ";rays=" << n_rays << ";seed=" << rng_seed << ";air=" << (air ? 1 : 0)
     << ";mat=" << (mat ? 1 : 0)
     << ";bands=" << (band_mode == BandMode::Multi ? "multi" : "single")
     << ";bin_width=" << bin_width << ";max_time=" << max_time;
  return fnv1a64(os.str());
}

Rir simulate_rir(const RoomSpec& room, int source_index, int receiver_index,
                 const MaterialDb* db, const SimConfig& config) {
  config.validate();
  validate_room(room, db);
  if (source_index < 0 ||
      source_index >= static_cast<int>(room.sources.size()))
    throw Error(ErrorKind::Config, "source index out of range");
  if (receiver_index < 0 ||
      receiver_index >= static_cast<int>(room.receivers.size()))
    throw Error(ErrorKind::Config, "receiver index out of range");

  const SourceSpec& source = room.sources[source_index];
  const ReceiverSpec& receiver = room.receivers[receiver_index];
  const double fs = room.environment.sample_rate;
  const bool multi = config.band_mode == BandMode::Multi;

  FilterBank bank;
  if (multi) bank = design_bank(fs, default_band_scheme().center_frequencies);

  SurfaceCoeffs coeffs = resolve_surface_coeffs(room, db, multi);
  const int n_bands = multi ? static_cast<int>(bank.centers.size()) : 1;
  if (n_bands < coeffs.n_bands) {
    // The bank dropped bands above Nyquist; drop the same trailing bands.
    coeffs.n_bands = n_bands;
    for (int w = 0; w < 6; ++w) {
      coeffs.absorption[w].resize(n_bands);
      coeffs.scattering[w].resize(n_bands);
    }
  }

  AirAttenuation air_att;
  const AirAttenuation* air = nullptr;
  if (config.air) {
    air_att = multi ? air_gamma(room.environment, bank.centers)
                    : air_gamma(room.environment, {1000.0});
    air = &air_att;
  }

  std::vector<Rir> bands;
  if (config.method != Method::SRT) {
    IsmOptions opt;
    opt.order = config.ism_order;
    opt.scattering_loss = config.method == Method::HYBRID;
    opt.air = air;
    bands = ism_rir(room, source, receiver, coeffs, opt);
  }
  if (config.method != Method::ISM) {
    TraceConfig tc;
    tc.n_rays = config.n_rays;
    tc.rng_seed = config.rng_seed;
    tc.min_specular_order =
        config.method == Method::HYBRID ? config.ism_order : -1;
    tc.bin_width = config.bin_width;
    tc.max_time = config.max_time;
    tc.threads = config.threads;
    const EnergyHistogram hist =
        trace(room, source, receiver, coeffs, air, tc);
    std::vector<Rir> traced =
        histogram_to_rir(hist, room.volume(), fs, config.rng_seed,
                         speed_of_sound(room.environment));
    if (bands.empty()) {
      bands = std::move(traced);
    } else {
      for (int b = 0; b < n_bands; ++b) {
        std::vector<double>& dst = bands[b].samples;
        const std::vector<double>& src = traced[b].samples;
        if (src.size() > dst.size()) dst.resize(src.size(), 0.0);
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] += src[i];
      }
    }
  }

  Rir result;
  if (multi) {
    result = merge_bands(bands, bank);
  } else {
    result = std::move(bands[0]);
  }
  result.fs = fs;
  result.meta.method = method_name(config.method);
  result.meta.seed = config.rng_seed;
  result.meta.bands = n_bands;
  result.meta.config_hash = config.hash();
  return result;
}

std::vector<double> convolve(const std::vector<double>& a,
                             const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_n = a.size() + b.size() - 1;
  if (static_cast<double>(a.size()) * static_cast<double>(b.size()) <=
      double{1 << 20}) {
    std::vector<double> out(out_n, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0.0) continue;
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
  }
  std::size_t n = 1;
  while (n < out_n) n <<= 1;
  std::vector<std::complex<double>> fa(n), fb(n);
  for (std::size_t i = 0; i < a.size(); ++i) fa[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) fb[i] = b[i];
  fft_inplace(fa, false);
  fft_inplace(fb, false);
  for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
  fft_inplace(fa, true);
  std::vector<double> out(out_n);
  for (std::size_t i = 0; i < out_n; ++i) out[i] = fa[i].real();
  return out;
}

AudioBuffer mix_scene(const std::vector<Rir>& rir_per_source,
                      const MixSpec& mix) {
  if (rir_per_source.empty())
    throw Error(ErrorKind::Config, "mix_scene: no RIRs given");
  const double fs = rir_per_source[0].fs;
  for (const Rir& r : rir_per_source) {
    if (r.fs != fs)
      throw Error(ErrorKind::Config, "mix_scene: RIR sample rates differ");
  }
  if (mix.target.fs != fs)
    throw Error(ErrorKind::Config,
                "mix_scene: target sample rate " + std::to_string(mix.target.fs) +
                    " Hz does not match the RIR rate " + std::to_string(fs) +
                    " Hz");
  if (mix.target_source < 0 ||
      mix.target_source >= static_cast<int>(rir_per_source.size()))
    throw Error(ErrorKind::Config, "mix_scene: target source index out of range");

  std::vector<double> out =
      convolve(mix.target.samples, rir_per_source[mix.target_source].samples);
  double peak = 0.0;
  for (double v : out) peak = std::max(peak, std::abs(v));
  if (peak <= 0.0)
    throw Error(ErrorKind::Simulation, "mix_scene: target signal is silent");

  // Active extent of the reverberated target; SNR powers are measured here.
  const double thresh = 1e-4 * peak;
  std::size_t first = 0, last = out.size() - 1;
  while (first < out.size() && std::abs(out[first]) < thresh) ++first;
  while (last > first && std::abs(out[last]) < thresh) --last;
  const std::size_t extent = last - first + 1;
  double p_target = 0.0;
  for (std::size_t i = first; i <= last; ++i) p_target += out[i] * out[i];
  p_target /= static_cast<double>(extent);

  for (const NoiseInput& noise : mix.noises) {
    if (noise.source_index < 0 ||
        noise.source_index >= static_cast<int>(rir_per_source.size()))
      throw Error(ErrorKind::Config, "mix_scene: noise source index out of range");
    if (noise.audio.fs != fs)
      throw Error(ErrorKind::Config,
                  "mix_scene: noise sample rate " +
                      std::to_string(noise.audio.fs) +
                      " Hz does not match the RIR rate " + std::to_string(fs) +
                      " Hz");
    const std::vector<double> wet =
        convolve(noise.audio.samples, rir_per_source[noise.source_index].samples);
    double p_noise = 0.0;
    for (std::size_t i = first; i <= last && i < wet.size(); ++i)
      p_noise += wet[i] * wet[i];
    p_noise /= static_cast<double>(extent);
    if (p_noise <= 0.0)
      throw Error(ErrorKind::Simulation,
                  "mix_scene: noise is silent over the target extent");
    const double gain =
        std::sqrt(p_target / (p_noise * std::pow(10.0, noise.snr_db / 10.0)));
    if (wet.size() > out.size()) out.resize(wet.size(), 0.0);
    for (std::size_t i = 0; i < wet.size(); ++i) out[i] += gain * wet[i];
  }

  double mix_peak = 0.0;
  for (double v : out) mix_peak = std::max(mix_peak, std::abs(v));
  if (mix_peak > 1.0) {
    const double scale = std::pow(10.0, -1.0 / 20.0) / mix_peak;
    for (double& v : out) v *= scale;
  }
  AudioBuffer buf;
  buf.samples = std::move(out);
  buf.fs = fs;
  return buf;
}

}  // namespace roomsim
