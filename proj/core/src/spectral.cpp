// Copyright 2026 The roomsim authors
// SPDX-License-Identifier: Apache-2.0

#include "roomsim/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "roomsim/error.hpp"
#include "roomsim/materials.hpp"

namespace roomsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Atmospheric attenuation in dB/m at the standard band centers, derived from
// the ISO 9613-1 closed form at sea-level pressure. Grid: temperature
// {10, 20, 30} C x relative humidity {30, 50, 70} %.
constexpr int kAirTemps = 3;
constexpr int kAirHums = 3;
constexpr int kAirBands = 7;
constexpr double kAirTempGrid[kAirTemps] = {10.0, 20.0, 30.0};
constexpr double kAirHumGrid[kAirHums] = {30.0, 50.0, 70.0};
constexpr double kAirBandCenters[kAirBands] = {125.0, 250.0,  500.0, 1000.0,
                                               2000.0, 4000.0, 8000.0};
constexpr double kAirDbPerMeter[kAirTemps][kAirHums][kAirBands] = {
    {{5.469648e-04, 1.044638e-03, 2.269692e-03, 6.769214e-03, 2.358129e-02,
      7.719084e-02, 1.881691e-01},
     {4.808355e-04, 1.046080e-03, 1.892401e-03, 4.264748e-03, 1.325047e-02,
      4.707369e-02, 1.568402e-01},
     {4.062927e-04, 1.038034e-03, 1.924223e-03, 3.657686e-03, 9.701575e-03,
      3.305860e-02, 1.183815e-01}},
    {{6.081750e-04, 1.418414e-03, 2.511343e-03, 5.005069e-03, 1.411726e-02,
      4.889191e-02, 1.683485e-01},
     {4.397900e-04, 1.309750e-03, 2.728134e-03, 4.664732e-03, 9.887016e-03,
      2.966553e-02, 1.052909e-01},
     {3.349867e-04, 1.123947e-03, 2.791090e-03, 4.977811e-03, 9.039436e-03,
      2.308577e-02, 7.763315e-02}},
    {{5.364521e-04, 1.669194e-03, 3.661201e-03, 6.154568e-03, 1.187921e-02,
      3.296491e-02, 1.140129e-01},
     {3.457485e-04, 1.241835e-03, 3.555504e-03, 7.032446e-03, 1.169078e-02,
      2.464488e-02, 7.405043e-02},
     {2.529294e-04, 9.546439e-04, 3.123948e-03, 7.407002e-03, 1.276786e-02,
      2.317710e-02, 5.994666e-02}}};

// Clamped linear interpolation weights on a small grid.
void grid_weights(const double* grid, int n, double x, int& i0, double& frac,
                  bool* clamped) {
  if (x <= grid[0]) {
    i0 = 0;
    frac = 0.0;
    if (x < grid[0]) *clamped = true;
    return;
  }
  if (x >= grid[n - 1]) {
    i0 = n - 2;
    frac = 1.0;
    if (x > grid[n - 1]) *clamped = true;
    return;
  }
  for (i0 = 0; i0 < n - 2 && x > grid[i0 + 1]; ++i0) {
  }
  frac = (x - grid[i0]) / (grid[i0 + 1] - grid[i0]);
}

int nearest_band_index(double center) {
  int best = 0;
  double best_d = std::fabs(std::log(center / kAirBandCenters[0]));
  for (int i = 1; i < kAirBands; ++i) {
    double d = std::fabs(std::log(center / kAirBandCenters[i]));
    if (d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

}  // namespace

AirAttenuation air_gamma(const EnvSpec& env,
                         const std::vector<double>& band_centers,
                         std::string* warning) {
  bool clamped = false;
  int ti;
  double tf;
  grid_weights(kAirTempGrid, kAirTemps, env.temperature_c, ti, tf, &clamped);
  int hi;
  double hf;
  grid_weights(kAirHumGrid, kAirHums, env.humidity_pct, hi, hf, &clamped);

  constexpr double kDbToNeper = 2.302585092994046 / 20.0;  // ln(10)/20
  AirAttenuation out;
  out.gamma.reserve(band_centers.size());
  for (double center : band_centers) {
    int b = nearest_band_index(center);
    double v00 = kAirDbPerMeter[ti][hi][b];
    double v01 = kAirDbPerMeter[ti][hi + 1][b];
    double v10 = kAirDbPerMeter[ti + 1][hi][b];
    double v11 = kAirDbPerMeter[ti + 1][hi + 1][b];
    double db_per_m = (1.0 - tf) * ((1.0 - hf) * v00 + hf * v01) +
                      tf * ((1.0 - hf) * v10 + hf * v11);
    out.gamma.push_back(db_per_m * kDbToNeper);
  }
  if (clamped && warning)
    *warning = "environment outside the attenuation table grid; values clamped";
  return out;
}

void apply_air_absorption(std::vector<double>& amplitudes,
                          const std::vector<double>& distances, double gamma) {
  if (amplitudes.size() != distances.size())
    throw Error(ErrorKind::Config, "apply_air_absorption: size mismatch");
  for (size_t i = 0; i < amplitudes.size(); ++i)
    amplitudes[i] *= std::exp(-gamma * distances[i]);
}

FilterBank design_bank(double fs, const std::vector<double>& centers) {
  if (centers.empty())
    throw Error(ErrorKind::Config, "design_bank: no band centers");
  for (size_t i = 1; i < centers.size(); ++i) {
    if (centers[i] <= centers[i - 1])
      throw Error(ErrorKind::Config, "design_bank: centers must be increasing");
  }

  FilterBank bank;
  const double nyquist = fs / 2.0;
  for (double c : centers) {
    if (c <= nyquist + 1e-9) bank.centers.push_back(c);
  }
  if (bank.centers.empty())
    throw Error(ErrorKind::Config, "design_bank: sample rate too low for any band");
  if (bank.centers.size() < centers.size())
    bank.warning = "dropped " +
                   std::to_string(centers.size() - bank.centers.size()) +
                   " band(s) above Nyquist";

  const int n = bank.fft_size;          // 512 design grid
  const int half = n / 2;               // 256 bins + Nyquist
  const int n_bands = static_cast<int>(bank.centers.size());
  bank.group_delay = half;

  // Raised-cosine crossfades between adjacent centers in log-frequency;
  // gains over all bands sum to exactly 1 on every grid bin, so the bank
  // sums to a unit impulse.
  auto band_gain = [&](int f, double freq) -> double {
    const auto& c = bank.centers;
    if (freq <= 0.0) return f == 0 ? 1.0 : 0.0;
    if (f > 0 && freq <= c[f - 1]) return 0.0;
    if (f + 1 < n_bands && freq >= c[f + 1]) return 0.0;
    if (freq <= c[f]) {
      if (f == 0) return 1.0;  // lowest band extends to DC
      double u = std::log(freq / c[f - 1]) / std::log(c[f] / c[f - 1]);
      double s = std::sin(0.5 * kPi * u);
      return s * s;
    }
    if (f + 1 >= n_bands) return 1.0;  // highest band extends to Nyquist
    double u = std::log(freq / c[f]) / std::log(c[f + 1] / c[f]);
    double co = std::cos(0.5 * kPi * u);
    return co * co;
  };

  bank.filters.assign(n_bands, std::vector<double>(n + 1, 0.0));
  for (int f = 0; f < n_bands; ++f) {
    std::vector<double> gain(half + 1);
    for (int k = 0; k <= half; ++k) gain[k] = band_gain(f, k * fs / n);
    for (int m = -half; m <= half; ++m) {
      double acc = gain[0];
      for (int k = 1; k < half; ++k)
        acc += 2.0 * gain[k] * std::cos(2.0 * kPi * k * m / n);
      acc += gain[half] * std::cos(kPi * m);
      double window = 0.5 * (1.0 + std::cos(kPi * m / half));
      bank.filters[f][half + m] = window * acc / n;
    }
  }
  return bank;
}

Rir merge_bands(const std::vector<Rir>& band_rirs, const FilterBank& bank) {
  if (band_rirs.size() != bank.filters.size())
    throw Error(ErrorKind::Config, "merge_bands: band count mismatch");
  if (band_rirs.empty()) return {};
  const size_t in_len = band_rirs[0].samples.size();
  const double fs = band_rirs[0].fs;
  for (const Rir& r : band_rirs) {
    if (r.samples.size() != in_len || r.fs != fs)
      throw Error(ErrorKind::Config, "merge_bands: band RIRs must share length and rate");
  }

  const size_t flt_len = bank.filters[0].size();
  const size_t out_len = in_len + flt_len - 1;
  std::vector<double> acc(out_len, 0.0);
  for (size_t f = 0; f < band_rirs.size(); ++f) {
    const std::vector<double>& x = band_rirs[f].samples;
    const std::vector<double>& h = bank.filters[f];
    for (size_t i = 0; i < x.size(); ++i) {
      const double xi = x[i];
      if (xi == 0.0) continue;
      double* dst = acc.data() + i;
      for (size_t j = 0; j < flt_len; ++j) dst[j] += xi * h[j];
    }
  }

  Rir out;
  out.fs = fs;
  out.meta = band_rirs[0].meta;
  out.meta.bands = static_cast<int>(band_rirs.size());
  // Shift by the group delay so the direct path stays at its physical sample.
  out.samples.assign(out_len, 0.0);
  const size_t gd = static_cast<size_t>(bank.group_delay);
  for (size_t i = 0; i + gd < out_len; ++i) out.samples[i] = acc[i + gd];
  return out;
}

double filter_response_db(const std::vector<double>& taps, double fs,
                          double freq_hz) {
  double re = 0.0, im = 0.0;
  const double w = 2.0 * kPi * freq_hz / fs;
  for (size_t nidx = 0; nidx < taps.size(); ++nidx) {
    re += taps[nidx] * std::cos(w * nidx);
    im -= taps[nidx] * std::sin(w * nidx);
  }
  double mag = std::sqrt(re * re + im * im);
  return 20.0 * std::log10(std::max(mag, 1e-300));
}

}  // namespace roomsim
