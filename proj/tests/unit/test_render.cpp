// Copyright 2026 The roomsim authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "roomsim/error.hpp"
#include "roomsim/ism.hpp"
#include "roomsim/materials.hpp"
#include "roomsim/render.hpp"
#include "roomsim/scene.hpp"
#include "support/oracles.hpp"

using namespace roomsim;

namespace {

RoomSpec ready_room(double alpha, double scattering = 0.0) {
  RoomSpec room;
  room.dimensions = {5, 4, 3};
  for (auto& s : room.surfaces) {
    s.absorption = alpha;
    s.scattering = scattering;
  }
  room.sources.push_back({{1.2, 1.1, 1.5}});
  ReceiverSpec rec;
  rec.position = {3.6, 2.9, 1.2};
  room.receivers.push_back(rec);
  return room;
}

double snr_db(const std::vector<double>& signal,
              const std::vector<double>& noise, size_t first, size_t last) {
  double ps = 0.0, pn = 0.0;
  for (size_t i = first; i <= last && i < signal.size(); ++i)
    ps += signal[i] * signal[i];
  for (size_t i = first; i <= last && i < noise.size(); ++i)
    pn += noise[i] * noise[i];
  return 10.0 * std::log10(ps / pn);
}

}  // namespace

TEST_CASE("method names parse and print consistently") {
  CHECK(method_name(parse_method("ism")) == "ism");
  CHECK(method_name(parse_method("srt")) == "srt");
  CHECK(method_name(parse_method("hybrid")) == "hybrid");
  try {
    parse_method("raytrace");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
  }
}

TEST_CASE("configuration invariants are enforced") {
  SimConfig ok;
  CHECK_NOTHROW(ok.validate());

  SimConfig mat_single;
  mat_single.mat = true;
  mat_single.band_mode = BandMode::Single;
  CHECK_THROWS_AS(mat_single.validate(), Error);
  mat_single.band_mode = BandMode::Multi;
  CHECK_NOTHROW(mat_single.validate());

  SimConfig no_rays;
  no_rays.method = Method::HYBRID;
  no_rays.n_rays = 0;
  CHECK_THROWS_AS(no_rays.validate(), Error);
  no_rays.method = Method::ISM;  // pure image method never traces rays
  CHECK_NOTHROW(no_rays.validate());

  SimConfig big_order;
  big_order.ism_order = 99;
  CHECK_THROWS_AS(big_order.validate(), Error);
  big_order.method = Method::SRT;  // order is unused for pure ray tracing
  CHECK_NOTHROW(big_order.validate());

  SimConfig bad_bin;
  bad_bin.bin_width = 0.0;
  CHECK_THROWS_AS(bad_bin.validate(), Error);

  SimConfig bad_threads;
  bad_threads.threads = -1;
  CHECK_THROWS_AS(bad_threads.validate(), Error);
}

TEST_CASE("config digest covers simulation fields but not the thread count") {
  SimConfig base;
  const std::uint64_t h0 = base.hash();
  CHECK(h0 == SimConfig(base).hash());  // stable

  SimConfig threads = base;
  threads.threads = 8;
  CHECK(threads.hash() == h0);  // output is thread-count independent

  SimConfig changed = base;
  changed.rng_seed = 1;
  CHECK(changed.hash() != h0);
  changed = base;
  changed.method = Method::ISM;
  CHECK(changed.hash() != h0);
  changed = base;
  changed.ism_order = 3;
  CHECK(changed.hash() != h0);
  changed = base;
  changed.n_rays = 1234;
  CHECK(changed.hash() != h0);
  changed = base;
  changed.air = true;
  CHECK(changed.hash() != h0);
  changed = base;
  changed.mat = true;
  changed.band_mode = BandMode::Multi;
  CHECK(changed.hash() != h0);
  changed = base;
  changed.band_mode = BandMode::Multi;
  CHECK(changed.hash() != h0);
  changed = base;
  changed.bin_width = 0.002;
  CHECK(changed.hash() != h0);
  changed = base;
  changed.max_time = 0.7;
  CHECK(changed.hash() != h0);
}

TEST_CASE("single-band image-method pipeline matches the direct computation") {
  RoomSpec room = ready_room(0.3);
  SimConfig cfg;
  cfg.method = Method::ISM;
  cfg.ism_order = 5;
  Rir via_pipeline = simulate_rir(room, 0, 0, nullptr, cfg);

  SurfaceCoeffs coeffs = resolve_surface_coeffs(room, nullptr, false);
  IsmOptions opt;
  opt.order = 5;
  Rir direct = ism_rir(room, room.sources[0], room.receivers[0], coeffs, opt)[0];

  REQUIRE(via_pipeline.samples.size() == direct.samples.size());
  for (size_t i = 0; i < direct.samples.size(); ++i)
    CHECK(via_pipeline.samples[i] == direct.samples[i]);

  CHECK(via_pipeline.meta.method == "ism");
  CHECK(via_pipeline.meta.bands == 1);
  CHECK(via_pipeline.meta.config_hash == cfg.hash());
  CHECK(via_pipeline.fs == 16000.0);
}

TEST_CASE("simulation is deterministic in the seed") {
  RoomSpec room = ready_room(0.3, 0.2);
  SimConfig cfg;
  cfg.method = Method::HYBRID;
  cfg.ism_order = 2;
  cfg.n_rays = 20000;
  cfg.rng_seed = 77;
  Rir a = simulate_rir(room, 0, 0, nullptr, cfg);
  Rir b = simulate_rir(room, 0, 0, nullptr, cfg);
  REQUIRE(a.samples.size() == b.samples.size());
  for (size_t i = 0; i < a.samples.size(); ++i)
    CHECK(a.samples[i] == b.samples[i]);

  cfg.rng_seed = 78;
  Rir c = simulate_rir(room, 0, 0, nullptr, cfg);
  bool any_diff = c.samples.size() != a.samples.size();
  for (size_t i = 0; !any_diff && i < a.samples.size(); ++i)
    any_diff = a.samples[i] != c.samples[i];
  CHECK(any_diff);
}

TEST_CASE("hybrid with zero scattering starts as the pure image response") {
  RoomSpec room = ready_room(0.55, 0.0);
  SimConfig cfg;
  cfg.method = Method::HYBRID;
  cfg.ism_order = 3;
  cfg.n_rays = 20000;
  cfg.rng_seed = 11;
  Rir hybrid = simulate_rir(room, 0, 0, nullptr, cfg);
  cfg.method = Method::ISM;
  Rir ism = simulate_rir(room, 0, 0, nullptr, cfg);

  // Nothing above order 3 can reach the receiver before 300 samples here.
  for (int i = 0; i < 300; ++i) {
    double lhs = i < static_cast<int>(hybrid.samples.size()) ? hybrid.samples[i] : 0.0;
    double rhs = i < static_cast<int>(ism.samples.size()) ? ism.samples[i] : 0.0;
    CHECK(std::fabs(lhs - rhs) <= 1e-9);
  }
  CHECK(hybrid.energy() > ism.energy());
  CHECK(hybrid.meta.method == "hybrid");
}

TEST_CASE("frequency-dependent simulation needs the multiband pipeline and a db") {
  MaterialDb db = MaterialDb::load(std::string(ROOMSIM_DATA_DIR) + "/materials.yaml");
  RoomSpec room = ready_room(0.3);
  room.surfaces[kFloor].material = "carpet_on_concrete";

  SimConfig cfg;
  cfg.method = Method::ISM;
  cfg.ism_order = 2;
  cfg.mat = true;
  cfg.band_mode = BandMode::Single;
  CHECK_THROWS_AS(simulate_rir(room, 0, 0, &db, cfg), Error);

  cfg.band_mode = BandMode::Multi;
  Rir rir = simulate_rir(room, 0, 0, &db, cfg);
  CHECK(rir.meta.bands == 7);
  CHECK(rir.energy() > 0.0);

  CHECK_THROWS_AS(simulate_rir(room, 0, 0, nullptr, cfg), Error);
}

TEST_CASE("out-of-range source and receiver indices are rejected") {
  RoomSpec room = ready_room(0.3);
  SimConfig cfg;
  cfg.method = Method::ISM;
  CHECK_THROWS_AS(simulate_rir(room, 1, 0, nullptr, cfg), Error);
  CHECK_THROWS_AS(simulate_rir(room, 0, 5, nullptr, cfg), Error);
  CHECK_THROWS_AS(simulate_rir(room, -1, 0, nullptr, cfg), Error);
}

TEST_CASE("convolution matches the reference on both code paths") {
  std::vector<double> a, b;
  for (int i = 0; i < 37; ++i) a.push_back(std::sin(0.3 * i) + 0.1 * i);
  for (int i = 0; i < 23; ++i) b.push_back(std::cos(0.7 * i));
  std::vector<double> direct = convolve(a, b);
  std::vector<double> expected = testsup::convolve_full(a, b);
  REQUIRE(direct.size() == expected.size());
  for (size_t i = 0; i < direct.size(); ++i)
    CHECK(direct[i] == doctest::Approx(expected[i]).epsilon(1e-12));

  // Large inputs switch to the transform path.
  std::vector<double> big_a(1500), big_b(1200);
  for (size_t i = 0; i < big_a.size(); ++i) big_a[i] = std::sin(0.01 * i);
  for (size_t i = 0; i < big_b.size(); ++i) big_b[i] = std::cos(0.02 * i) * 0.5;
  std::vector<double> fast = convolve(big_a, big_b);
  std::vector<double> slow = testsup::convolve_full(big_a, big_b);
  REQUIRE(fast.size() == slow.size());
  double worst = 0.0;
  for (size_t i = 0; i < fast.size(); ++i)
    worst = std::max(worst, std::fabs(fast[i] - slow[i]));
  CHECK(worst <= 1e-9);
}

TEST_CASE("mixing without noise is plain convolution at unit gain") {
  Rir rir;
  rir.fs = 16000;
  rir.samples = {0.5, 0.0, 0.25};
  MixSpec mix;
  mix.target.fs = 16000;
  mix.target.samples = {1.0, -0.5, 0.25, 0.0, 0.125};
  AudioBuffer out = mix_scene({rir}, mix);
  std::vector<double> expected = convolve(mix.target.samples, rir.samples);
  REQUIRE(out.samples.size() == expected.size());
  for (size_t i = 0; i < out.samples.size(); ++i)
    CHECK(out.samples[i] == expected[i]);
  CHECK(out.fs == 16000.0);
}

TEST_CASE("equal-power noise at 0 dB gets unit gain") {
  Rir rir;
  rir.fs = 16000;
  rir.samples = {0.3};
  MixSpec mix;
  mix.target.fs = 16000;
  mix.target.samples.assign(800, 0.0);
  for (int i = 0; i < 800; ++i) mix.target.samples[i] = 0.4 * std::sin(0.2 * i);
  NoiseInput noise;
  noise.audio.fs = 16000;
  noise.audio.samples = mix.target.samples;  // same signal, same power
  noise.source_index = 0;
  noise.snr_db = 0.0;
  mix.noises.push_back(noise);

  AudioBuffer out = mix_scene({rir}, mix);
  std::vector<double> dry = convolve(mix.target.samples, rir.samples);
  REQUIRE(out.samples.size() == dry.size());
  for (size_t i = 0; i < out.samples.size(); ++i)
    CHECK(out.samples[i] == doctest::Approx(2.0 * dry[i]).epsilon(1e-9));
}

TEST_CASE("requested signal-to-noise ratios are realized post-convolution") {
  Rir target_rir, noise_rir;
  target_rir.fs = noise_rir.fs = 16000;
  target_rir.samples = {0.25, 0.1, 0.05};
  noise_rir.samples = {0.125, -0.06, 0.03, 0.01};

  MixSpec mix;
  mix.target.fs = 16000;
  mix.target.samples.assign(1200, 0.0);
  for (int i = 0; i < 1200; ++i)
    mix.target.samples[i] = 0.3 * std::sin(0.11 * i) + 0.05 * std::sin(0.037 * i);
  mix.target_source = 0;

  for (double want : {2.0, 5.0}) {
    NoiseInput noise;
    noise.audio.fs = 16000;
    noise.audio.samples.assign(1600, 0.0);
    for (int i = 0; i < 1600; ++i)
      noise.audio.samples[i] = 0.2 * std::cos(0.083 * i) + 0.04 * std::cos(0.029 * i);
    noise.source_index = 1;
    noise.snr_db = want;
    MixSpec local = mix;
    local.noises.push_back(noise);

    AudioBuffer out = mix_scene({target_rir, noise_rir}, local);
    std::vector<double> dry = convolve(mix.target.samples, target_rir.samples);

    // Recover the scaled noise component; mixing is additive before any
    // clipping, and these amplitudes cannot clip.
    std::vector<double> part(out.samples.size(), 0.0);
    for (size_t i = 0; i < out.samples.size(); ++i)
      part[i] = out.samples[i] - (i < dry.size() ? dry[i] : 0.0);

    double peak = 0.0;
    for (double v : dry) peak = std::max(peak, std::fabs(v));
    size_t first = 0, last = dry.size() - 1;
    while (first < dry.size() && std::fabs(dry[first]) < 1e-4 * peak) ++first;
    while (last > first && std::fabs(dry[last]) < 1e-4 * peak) --last;

    CHECK(snr_db(dry, part, first, last) == doctest::Approx(want).epsilon(1e-6));
  }
}

TEST_CASE("scaling every impulse response leaves the mixed ratio unchanged") {
  Rir a, b;
  a.fs = b.fs = 16000;
  a.samples = {0.2, 0.05};
  b.samples = {0.1, -0.02, 0.01};
  MixSpec mix;
  mix.target.fs = 16000;
  mix.target.samples.assign(600, 0.0);
  for (int i = 0; i < 600; ++i) mix.target.samples[i] = 0.3 * std::sin(0.17 * i);
  NoiseInput noise;
  noise.audio.fs = 16000;
  noise.audio.samples.assign(700, 0.0);
  for (int i = 0; i < 700; ++i) noise.audio.samples[i] = 0.25 * std::cos(0.05 * i);
  noise.source_index = 1;
  noise.snr_db = 4.0;
  mix.noises.push_back(noise);

  AudioBuffer out1 = mix_scene({a, b}, mix);
  Rir a2 = a, b2 = b;
  for (double& v : a2.samples) v *= 2.0;
  for (double& v : b2.samples) v *= 2.0;
  AudioBuffer out2 = mix_scene({a2, b2}, mix);

  REQUIRE(out1.samples.size() == out2.samples.size());
  for (size_t i = 0; i < out1.samples.size(); ++i)
    CHECK(out2.samples[i] == doctest::Approx(2.0 * out1.samples[i]).epsilon(1e-9));
}

TEST_CASE("a mix that would clip is normalized to -1 dBFS") {
  Rir rir;
  rir.fs = 16000;
  rir.samples = {2.0};  // amplification guarantees clipping
  MixSpec mix;
  mix.target.fs = 16000;
  mix.target.samples.assign(100, 0.0);
  for (int i = 0; i < 100; ++i) mix.target.samples[i] = std::sin(0.3 * i);
  AudioBuffer out = mix_scene({rir}, mix);
  double peak = 0.0;
  for (double v : out.samples) peak = std::max(peak, std::fabs(v));
  CHECK(peak == doctest::Approx(std::pow(10.0, -1.0 / 20.0)).epsilon(1e-9));
}

TEST_CASE("mixing errors are specific") {
  Rir rir;
  rir.fs = 16000;
  rir.samples = {0.5};

  MixSpec wrong_fs;
  wrong_fs.target.fs = 44100;
  wrong_fs.target.samples = {1.0, 2.0};
  try {
    mix_scene({rir}, wrong_fs);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
    CHECK(std::string(e.what()).find("44100") != std::string::npos);
    CHECK(std::string(e.what()).find("16000") != std::string::npos);
  }

  MixSpec silent;
  silent.target.fs = 16000;
  silent.target.samples.assign(10, 0.0);
  try {
    mix_scene({rir}, silent);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Simulation);
  }

  MixSpec bad_index;
  bad_index.target.fs = 16000;
  bad_index.target.samples = {1.0};
  bad_index.target_source = 3;
  CHECK_THROWS_AS(mix_scene({rir}, bad_index), Error);

  CHECK_THROWS_AS(mix_scene({}, bad_index), Error);
}
