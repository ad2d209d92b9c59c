// Copyright 2026 The roomsim authors
// SPDX-License-Identifier: Apache-2.0
//
// roomsim: shoebox room impulse response simulator and far-field mixer.

#include <sys/utsname.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "roomsim/audio.hpp"
#include "roomsim/error.hpp"
#include "roomsim/ism.hpp"
#include "roomsim/materials.hpp"
#include "roomsim/raytracer.hpp"
#include "roomsim/render.hpp"
#include "roomsim/scene.hpp"
#include "roomsim/spectral.hpp"

namespace {

using namespace roomsim;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitSimulation = 4;

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Config:
      return kExitUsage;
    case ErrorKind::Schema:
    case ErrorKind::Geometry:
    case ErrorKind::Material:
    case ErrorKind::Io:
      return kExitInput;
    case ErrorKind::Simulation:
      return kExitSimulation;
  }
  return kExitSimulation;
}

std::string machine_descriptor() {
  utsname u{};
  std::string s = "unknown";
  if (uname(&u) == 0)
    s = std::string(u.sysname) + " " + u.machine + " " + u.release;
  s += ", " + std::to_string(std::thread::hardware_concurrency()) +
       " hardware threads";
  return s;
}

struct SimFlags {
  std::string room_path;
  std::string materials_path;
  std::string method = "hybrid";
  int ism_order = 17;
  std::uint64_t n_rays = 100000;
  std::uint64_t seed = 0;
  bool air = false;
  bool mat = false;
  bool multiband = false;
  double bin_width = 0.004;
  double max_time = 0.0;
  int threads = 0;
  int source = 0;
  int receiver = 0;
};

void add_sim_flags(CLI::App* cmd, SimFlags& f, bool need_room) {
  auto* room = cmd->add_option("--room", f.room_path, "Room description file (YAML)");
  if (need_room) room->required();
  cmd->add_option("--materials", f.materials_path,
                  "Material database (YAML); defaults to $ROOMSIM_MATERIALS");
  cmd->add_option("--method", f.method, "Simulation method: ism, srt, hybrid")
      ->check(CLI::IsMember({"ism", "srt", "hybrid"}))
      ->capture_default_str();
  cmd->add_option("--ism-order", f.ism_order, "Image source reflection order")
      ->capture_default_str();
  cmd->add_option("--rays", f.n_rays, "Number of rays to trace")
      ->capture_default_str();
  cmd->add_option("--seed", f.seed, "RNG seed")->capture_default_str();
  cmd->add_flag("--air", f.air, "Apply atmospheric absorption");
  cmd->add_flag("--mat", f.mat,
                "Use frequency-dependent material coefficients (requires --multiband)");
  cmd->add_flag("--multiband", f.multiband,
                "Render per octave band and merge through the filter bank");
  cmd->add_option("--bin-width", f.bin_width, "Energy histogram bin width (s)")
      ->capture_default_str();
  cmd->add_option("--max-time", f.max_time,
                  "Ray tracing time limit (s); 0 = twice the Eyring RT60");
  cmd->add_option("--threads", f.threads, "Worker threads (0 = auto)")
      ->capture_default_str();
  cmd->add_option("--source", f.source, "Source index in the room file")
      ->capture_default_str();
  cmd->add_option("--receiver", f.receiver, "Receiver index in the room file")
      ->capture_default_str();
}

SimConfig to_config(const SimFlags& f) {
  SimConfig cfg;
  cfg.method = parse_method(f.method);
  cfg.ism_order = f.ism_order;
  cfg.n_rays = f.n_rays;
  cfg.rng_seed = f.seed;
  cfg.air = f.air;
  cfg.mat = f.mat;
  cfg.band_mode = f.multiband ? BandMode::Multi : BandMode::Single;
  cfg.bin_width = f.bin_width;
  cfg.max_time = f.max_time;
  cfg.threads = f.threads;
  return cfg;
}

std::optional<MaterialDb> load_db(const SimFlags& f) {
  std::string path = f.materials_path;
  if (path.empty()) {
    const char* env = std::getenv("ROOMSIM_MATERIALS");
    if (env) path = env;
  }
  if (path.empty()) return std::nullopt;
  return MaterialDb::load(path);
}

WavFormat parse_format(const std::string& name) {
  if (name == "float32") return WavFormat::Float32;
  if (name == "pcm16") return WavFormat::Pcm16;
  throw Error(ErrorKind::Config, "unknown sample format '" + name + "'");
}

void dump_histogram_csv(const std::string& path, const RoomSpec& room,
                        const SimFlags& flags, const MaterialDb* db) {
  const SimConfig cfg = to_config(flags);
  SurfaceCoeffs coeffs =
      resolve_surface_coeffs(room, db, cfg.band_mode == BandMode::Multi);
  AirAttenuation air_att;
  const AirAttenuation* air = nullptr;
  if (cfg.air) {
    std::vector<double> centers{1000.0};
    if (cfg.band_mode == BandMode::Multi) {
      const FilterBank bank =
          design_bank(room.environment.sample_rate,
                      default_band_scheme().center_frequencies);
      centers = bank.centers;
      if (static_cast<int>(centers.size()) < coeffs.n_bands) {
        coeffs.n_bands = static_cast<int>(centers.size());
        for (int w = 0; w < 6; ++w) {
          coeffs.absorption[w].resize(coeffs.n_bands);
          coeffs.scattering[w].resize(coeffs.n_bands);
        }
      }
    }
    air_att = air_gamma(room.environment, centers);
    air = &air_att;
  }
  TraceConfig tc;
  tc.n_rays = cfg.n_rays;
  tc.rng_seed = cfg.rng_seed;
  tc.min_specular_order = cfg.method == Method::HYBRID ? cfg.ism_order : -1;
  tc.bin_width = cfg.bin_width;
  tc.max_time = cfg.max_time;
  tc.threads = cfg.threads;
  const EnergyHistogram hist =
      trace(room, room.sources[flags.source], room.receivers[flags.receiver],
            coeffs, air, tc);

  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  out << "bin_start_s";
  for (int b = 0; b < hist.n_bands(); ++b) out << ",energy_band" << b;
  out << "\n";
  char buf[64];
  for (int i = 0; i < hist.n_bins(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.6f", i * hist.bin_width);
    out << buf;
    for (int b = 0; b < hist.n_bands(); ++b) {
      std::snprintf(buf, sizeof(buf), "%.12e", hist.bins[b][i]);
      out << "," << buf;
    }
    out << "\n";
  }
}

int cmd_simulate(const SimFlags& flags, const std::string& out_path,
                 const std::string& format_name,
                 const std::string& histogram_path) {
  const std::optional<MaterialDb> db = load_db(flags);
  const MaterialDb* db_ptr = db ? &*db : nullptr;
  const RoomSpec room = parse_room(flags.room_path, db_ptr);
  const SimConfig cfg = to_config(flags);
  const Rir rir = simulate_rir(room, flags.source, flags.receiver, db_ptr, cfg);
  write_wav(out_path, rir.samples, rir.fs, parse_format(format_name));
  write_rir_sidecar(out_path, rir);
  if (!histogram_path.empty() && cfg.method != Method::ISM)
    dump_histogram_csv(histogram_path, room, flags, db_ptr);
  return kExitOk;
}

int cmd_mix(const SimFlags& flags, const std::string& target_path,
            int target_source, const std::vector<std::string>& noise_paths,
            const std::vector<int>& noise_sources,
            const std::vector<double>& snrs, const std::string& out_path,
            const std::string& format_name) {
  if (noise_paths.size() != noise_sources.size() ||
      noise_paths.size() != snrs.size())
    throw Error(ErrorKind::Config,
                "--noise, --noise-source, and --snr must be given the same "
                "number of times");

  const std::optional<MaterialDb> db = load_db(flags);
  const MaterialDb* db_ptr = db ? &*db : nullptr;
  const RoomSpec room = parse_room(flags.room_path, db_ptr);
  const SimConfig cfg = to_config(flags);

  std::vector<Rir> rirs;
  rirs.reserve(room.sources.size());
  for (int s = 0; s < static_cast<int>(room.sources.size()); ++s)
    rirs.push_back(simulate_rir(room, s, flags.receiver, db_ptr, cfg));

  MixSpec mix;
  const WavData target = read_wav(target_path);
  mix.target.samples = target.samples;
  mix.target.fs = target.fs;
  mix.target_source = target_source;
  for (std::size_t i = 0; i < noise_paths.size(); ++i) {
    NoiseInput n;
    const WavData wav = read_wav(noise_paths[i]);
    n.audio.samples = wav.samples;
    n.audio.fs = wav.fs;
    n.source_index = noise_sources[i];
    n.snr_db = snrs[i];
    mix.noises.push_back(std::move(n));
  }
  const AudioBuffer out = mix_scene(rirs, mix);
  write_wav(out_path, out.samples, out.fs, parse_format(format_name));
  return kExitOk;
}

int cmd_bench(const std::string& mode, int trials, int threads,
              const std::string& out_path) {
  if (trials < 2)
    throw Error(ErrorKind::Config, "bench needs at least 2 trials for a std-dev");

  RoomSpec room;
  room.dimensions = {8.0, 9.0, 3.0};
  room.environment.sample_rate = 16000;
  const double alpha =
      eyring_absorption(room.volume(), room.surface_area(), 0.5);
  for (auto& s : room.surfaces) {
    s.absorption = alpha;
    s.scattering = 0.5;
  }
  SourceSpec src;
  src.position = {2.0, 3.0, 1.5};
  ReceiverSpec rec;
  rec.position = {6.0, 6.5, 1.5};
  room.sources.push_back(src);
  room.receivers.push_back(rec);

  struct Row {
    std::uint64_t value;
    double mean_s;
    double std_s;
  };
  std::vector<std::uint64_t> values;
  std::vector<Row> rows;
  std::string param;
  if (mode == "rays") {
    param = "n_rays";
    values = {1000, 10000, 100000, 1000000};
  } else if (mode == "order") {
    param = "ism_order";
    for (std::uint64_t m = 1; m <= 17; ++m) values.push_back(m);
  } else {
    throw Error(ErrorKind::Config, "bench mode must be 'rays' or 'order'");
  }

  for (std::uint64_t v : values) {
    SimConfig cfg;
    cfg.method = Method::HYBRID;
    cfg.ism_order = mode == "rays" ? 3 : static_cast<int>(v);
    cfg.n_rays = mode == "rays" ? v : 10000;
    cfg.rng_seed = 1;
    cfg.threads = threads;
    simulate_rir(room, 0, 0, nullptr, cfg);  // warmup, untimed
    std::vector<double> times(trials);
    for (int t = 0; t < trials; ++t) {
      cfg.rng_seed = static_cast<std::uint64_t>(t + 1);
      const auto start = std::chrono::steady_clock::now();
      simulate_rir(room, 0, 0, nullptr, cfg);
      const auto stop = std::chrono::steady_clock::now();
      times[t] = std::chrono::duration<double>(stop - start).count();
    }
    const double mean =
        std::accumulate(times.begin(), times.end(), 0.0) / trials;
    double var = 0.0;
    for (double t : times) var += (t - mean) * (t - mean);
    var /= trials - 1;
    rows.push_back({v, mean, std::sqrt(var)});
  }

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty() && out_path != "-") {
    file.open(out_path);
    if (!file)
      throw Error(ErrorKind::Io, "cannot open '" + out_path + "' for writing");
    out = &file;
  }
  *out << "# machine: " << machine_descriptor() << "\n";
  *out << "# room: 8x9x3 m, rt60 0.5 s, scattering 0.5, method hybrid\n";
  *out << param << ",mean_s,std_s,trials\n";
  char buf[64];
  for (const Row& r : rows) {
    std::snprintf(buf, sizeof(buf), "%llu,%.6e,%.6e,%d",
                  static_cast<unsigned long long>(r.value), r.mean_s, r.std_s,
                  trials);
    *out << buf << "\n";
  }
  return kExitOk;
}

int cmd_materials(const std::string& db_path, const std::string& name) {
  std::string path = db_path;
  if (path.empty()) {
    const char* env = std::getenv("ROOMSIM_MATERIALS");
    if (env) path = env;
  }
  if (path.empty())
    throw Error(ErrorKind::Config,
                "no material database: pass --materials or set ROOMSIM_MATERIALS");
  const MaterialDb db = MaterialDb::load(path);
  const BandScheme& bands = default_band_scheme();

  auto print_one = [&](const Material& m) {
    std::cout << m.name << "\n";
    std::cout << "  absorption:";
    for (double a : m.absorption) std::printf(" %.3f", a);
    std::cout << "\n";
    if (!m.scattering.empty()) {
      std::cout << "  scattering:";
      for (double s : m.scattering) std::printf(" %.3f", s);
      std::cout << "\n";
    }
    if (!m.source.empty()) std::cout << "  source: " << m.source << "\n";
  };

  std::cout << "bands (Hz):";
  for (double f : bands.center_frequencies)
    std::printf(" %g", f);
  std::cout << "\n";
  if (!name.empty()) {
    print_one(db.lookup(name));
  } else {
    for (const std::string& n : db.names()) print_one(db.lookup(n));
  }
  return kExitOk;
}

int cmd_filters(double fs, const std::string& out_path) {
  const FilterBank bank =
      design_bank(fs, default_band_scheme().center_frequencies);
  if (!bank.warning.empty()) std::cerr << "warning: " << bank.warning << "\n";

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty() && out_path != "-") {
    file.open(out_path);
    if (!file)
      throw Error(ErrorKind::Io, "cannot open '" + out_path + "' for writing");
    out = &file;
  }
  *out << "freq_hz";
  for (double c : bank.centers) {
    char name[32];
    std::snprintf(name, sizeof(name), ",mag_db_%g", c);
    *out << name;
  }
  *out << "\n";
  const int n_points = 512;
  char buf[64];
  for (int i = 1; i <= n_points; ++i) {
    const double f = fs / 2.0 * i / n_points;
    std::snprintf(buf, sizeof(buf), "%.3f", f);
    *out << buf;
    for (const auto& taps : bank.filters) {
      std::snprintf(buf, sizeof(buf), "%.6f", filter_response_db(taps, fs, f));
      *out << "," << buf;
    }
    *out << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"roomsim: shoebox room impulse response simulator"};
  app.require_subcommand(1);

  SimFlags sim_flags;
  std::string out_path;
  std::string format_name = "float32";
  std::string histogram_path;
  CLI::App* simulate = app.add_subcommand("simulate", "Render a RIR to a WAV file");
  add_sim_flags(simulate, sim_flags, true);
  simulate->add_option("-o,--out", out_path, "Output WAV path")->required();
  simulate->add_option("--format", format_name, "Sample format: float32, pcm16")
      ->check(CLI::IsMember({"float32", "pcm16"}))
      ->capture_default_str();
  simulate->add_option("--dump-histogram", histogram_path,
                       "Also write the ray-tracing energy histogram (CSV)");

  SimFlags mix_flags;
  std::string mix_out, mix_format = "float32", target_path;
  int target_source = 0;
  std::vector<std::string> noise_paths;
  std::vector<int> noise_sources;
  std::vector<double> snrs;
  CLI::App* mix = app.add_subcommand("mix", "Convolve and mix a far-field scene");
  add_sim_flags(mix, mix_flags, true);
  mix->add_option("--target", target_path, "Target (speech) WAV")->required();
  mix->add_option("--target-source", target_source,
                  "Source index the target plays from")
      ->capture_default_str();
  mix->add_option("--noise", noise_paths, "Noise WAV (repeatable)");
  mix->add_option("--noise-source", noise_sources,
                  "Source index per --noise (repeatable)");
  mix->add_option("--snr", snrs, "SNR in dB per --noise (repeatable)");
  mix->add_option("-o,--out", mix_out, "Output WAV path")->required();
  mix->add_option("--format", mix_format, "Sample format: float32, pcm16")
      ->check(CLI::IsMember({"float32", "pcm16"}))
      ->capture_default_str();

  std::string bench_mode = "rays", bench_out;
  int bench_trials = 20, bench_threads = 0;
  CLI::App* bench = app.add_subcommand("bench", "Runtime scaling sweeps");
  bench->add_option("--mode", bench_mode, "Sweep axis: rays, order")
      ->check(CLI::IsMember({"rays", "order"}))
      ->capture_default_str();
  bench->add_option("--trials", bench_trials, "Trials per sweep point (>= 2)")
      ->capture_default_str();
  bench->add_option("--threads", bench_threads, "Worker threads (0 = auto)")
      ->capture_default_str();
  bench->add_option("-o,--out", bench_out, "Output CSV path (default stdout)");

  std::string mat_db_path, mat_name;
  CLI::App* materials = app.add_subcommand("materials", "List the material database");
  materials->add_option("--materials", mat_db_path,
                        "Material database (YAML); defaults to $ROOMSIM_MATERIALS");
  materials->add_option("--name", mat_name, "Show a single material");

  double filters_fs = 16000.0;
  std::string filters_out;
  CLI::App* filters = app.add_subcommand("filters", "Dump filter bank responses (CSV)");
  filters->add_option("--fs", filters_fs, "Sample rate (Hz)")
      ->capture_default_str();
  filters->add_option("-o,--out", filters_out, "Output CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (simulate->parsed())
      return cmd_simulate(sim_flags, out_path, format_name, histogram_path);
    if (mix->parsed())
      return cmd_mix(mix_flags, target_path, target_source, noise_paths,
                     noise_sources, snrs, mix_out, mix_format);
    if (bench->parsed())
      return cmd_bench(bench_mode, bench_trials, bench_threads, bench_out);
    if (materials->parsed()) return cmd_materials(mat_db_path, mat_name);
    if (filters->parsed()) return cmd_filters(filters_fs, filters_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSimulation;
  }
  return kExitUsage;
}
