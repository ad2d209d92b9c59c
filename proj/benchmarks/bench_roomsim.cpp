// Copyright 2026 The roomsim authors
// SPDX-License-Identifier: Apache-2.0
//
// Microbenchmarks for the hot paths. Not a ctest target; run directly or via
// the `roomsim bench` subcommand for the end-to-end scaling sweeps.

#include <benchmark/benchmark.h>

#include "roomsim/ism.hpp"
#include "roomsim/materials.hpp"
#include "roomsim/raytracer.hpp"
#include "roomsim/render.hpp"
#include "roomsim/scene.hpp"
#include "roomsim/spectral.hpp"

namespace {

using namespace roomsim;

RoomSpec bench_room() {
  RoomSpec room;
  room.dimensions = {5.0, 4.0, 3.0};
  room.environment.sample_rate = 16000;
  for (auto& s : room.surfaces) {
    s.absorption = 0.3;
    s.scattering = 0.4;
  }
  SourceSpec src;
  src.position = {1.2, 1.1, 1.5};
  ReceiverSpec rec;
  rec.position = {3.6, 2.9, 1.2};
  room.sources.push_back(src);
  room.receivers.push_back(rec);
  return room;
}

void BM_enumerate_images(benchmark::State& state) {
  const RoomSpec room = bench_room();
  const SurfaceCoeffs coeffs = resolve_surface_coeffs(room, nullptr, false);
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto images = enumerate_images(room, room.sources[0], order, coeffs);
    benchmark::DoNotOptimize(images);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(image_count(order)));
}
BENCHMARK(BM_enumerate_images)->Arg(3)->Arg(8)->Arg(17);

void BM_ism_rir(benchmark::State& state) {
  const RoomSpec room = bench_room();
  const SurfaceCoeffs coeffs = resolve_surface_coeffs(room, nullptr, false);
  IsmOptions opt;
  opt.order = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto rirs = ism_rir(room, room.sources[0], room.receivers[0], coeffs, opt);
    benchmark::DoNotOptimize(rirs);
  }
}
BENCHMARK(BM_ism_rir)->Arg(2)->Arg(6)->Arg(12);

void BM_trace(benchmark::State& state) {
  const RoomSpec room = bench_room();
  const SurfaceCoeffs coeffs = resolve_surface_coeffs(room, nullptr, false);
  TraceConfig tc;
  tc.n_rays = static_cast<std::uint64_t>(state.range(0));
  tc.rng_seed = 1;
  tc.threads = 1;
  for (auto _ : state) {
    auto hist = trace(room, room.sources[0], room.receivers[0], coeffs,
                      nullptr, tc);
    benchmark::DoNotOptimize(hist);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(tc.n_rays));
}
BENCHMARK(BM_trace)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_histogram_to_rir(benchmark::State& state) {
  const RoomSpec room = bench_room();
  const SurfaceCoeffs coeffs = resolve_surface_coeffs(room, nullptr, false);
  TraceConfig tc;
  tc.n_rays = 20000;
  tc.rng_seed = 1;
  tc.threads = 1;
  const EnergyHistogram hist =
      trace(room, room.sources[0], room.receivers[0], coeffs, nullptr, tc);
  const double c = speed_of_sound(room.environment);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto rirs = histogram_to_rir(hist, room.volume(), 16000.0, ++seed, c);
    benchmark::DoNotOptimize(rirs);
  }
}
BENCHMARK(BM_histogram_to_rir);

void BM_design_bank(benchmark::State& state) {
  const std::vector<double>& centers = default_band_scheme().center_frequencies;
  for (auto _ : state) {
    FilterBank bank = design_bank(16000.0, centers);
    benchmark::DoNotOptimize(bank);
  }
}
BENCHMARK(BM_design_bank);

void BM_simulate_hybrid(benchmark::State& state) {
  const RoomSpec room = bench_room();
  SimConfig cfg;
  cfg.method = Method::HYBRID;
  cfg.ism_order = 3;
  cfg.n_rays = 20000;
  cfg.rng_seed = 1;
  cfg.threads = 1;
  for (auto _ : state) {
    Rir rir = simulate_rir(room, 0, 0, nullptr, cfg);
    benchmark::DoNotOptimize(rir);
  }
}
BENCHMARK(BM_simulate_hybrid);

}  // namespace

BENCHMARK_MAIN();
