// Copyright 2026 The roomsim authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "roomsim/audio.hpp"

namespace {

const char* kCli = ROOMSIM_CLI_PATH;
const std::string kMaterials = std::string(ROOMSIM_DATA_DIR) + "/materials.yaml";

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), {});
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

RunResult run_cli(const std::string& args) {
  const std::string out_path = temp_path("roomsim_cli_stdout.txt");
  const std::string err_path = temp_path("roomsim_cli_stderr.txt");
  const std::string cmd =
      std::string(kCli) + " " + args + " >" + out_path + " 2>" + err_path;
  int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return r;
}

const std::string& room_file() {
  static const std::string path = [] {
    std::string p = temp_path("roomsim_cli_room.yaml");
    std::ofstream out(p);
    out << "dimensions: [5, 4, 3]\n"
           "temperature_c: 20\n"
           "humidity_pct: 50\n"
           "sample_rate: 16000\n"
           "surfaces:\n"
           "  west: {absorption: 0.3}\n"
           "  east: {absorption: 0.3}\n"
           "  south: {absorption: 0.3}\n"
           "  north: {absorption: 0.3}\n"
           "  floor: {absorption: 0.3, scattering: 0.2}\n"
           "  ceiling: {absorption: 0.3}\n"
           "sources:\n"
           "  - position: [1.2, 1.1, 1.5]\n"
           "  - position: [4.0, 3.2, 1.0]\n"
           "receivers:\n"
           "  - position: [3.6, 2.9, 1.2]\n";
    return p;
  }();
  return path;
}

}  // namespace

TEST_CASE("cli: simulate writes a waveform and sidecar on the happy path") {
  const std::string out = temp_path("roomsim_cli_out.wav");
  RunResult r = run_cli("simulate --room " + room_file() +
                        " --method hybrid --ism-order 2 --rays 2000 --seed 7 -o " +
                        out);
  CHECK(r.code == 0);
  CHECK(std::filesystem::exists(out));
  CHECK(std::filesystem::exists(out + ".json"));
  roomsim::WavData wav = roomsim::read_wav(out);
  CHECK(wav.fs == 16000.0);
  CHECK(!wav.samples.empty());
  std::remove(out.c_str());
  std::remove((out + ".json").c_str());
}

TEST_CASE("cli: fixed seeds give byte-identical outputs across thread counts") {
  const std::string a = temp_path("roomsim_cli_a.wav");
  const std::string b = temp_path("roomsim_cli_b.wav");
  RunResult ra = run_cli("simulate --room " + room_file() +
                         " --method hybrid --ism-order 2 --rays 2000 --seed 7"
                         " --threads 1 -o " + a);
  RunResult rb = run_cli("simulate --room " + room_file() +
                         " --method hybrid --ism-order 2 --rays 2000 --seed 7"
                         " --threads 2 -o " + b);
  REQUIRE(ra.code == 0);
  REQUIRE(rb.code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a + ".json") == slurp(b + ".json"));
  for (const std::string& p : {a, b}) {
    std::remove(p.c_str());
    std::remove((p + ".json").c_str());
  }
}

TEST_CASE("cli: histogram dump is a per-band csv") {
  const std::string out = temp_path("roomsim_cli_h.wav");
  const std::string hist = temp_path("roomsim_cli_h.csv");
  RunResult r = run_cli("simulate --room " + room_file() +
                        " --method srt --rays 2000 --seed 3 -o " + out +
                        " --dump-histogram " + hist);
  CHECK(r.code == 0);
  std::string csv = slurp(hist);
  CHECK(csv.find("bin_start_s") != std::string::npos);
  CHECK(csv.find('\n') != std::string::npos);
  std::remove(out.c_str());
  std::remove((out + ".json").c_str());
  std::remove(hist.c_str());
}

TEST_CASE("cli: missing room file exits with the input-error code") {
  RunResult r = run_cli(
      "simulate --room /nonexistent/room.yaml --method ism -o /tmp/x.wav");
  CHECK(r.code == 3);
  CHECK(r.err.find("/nonexistent/room.yaml") != std::string::npos);
}

TEST_CASE("cli: frequency-dependent materials without multiband is a usage error") {
  RunResult r = run_cli("simulate --room " + room_file() + " --materials " +
                        kMaterials + " --method ism --mat -o /tmp/x.wav");
  CHECK(r.code == 2);
}

TEST_CASE("cli: unknown flags and bad values are usage errors") {
  CHECK(run_cli("simulate --room " + room_file() +
                " --definitely-not-a-flag -o /tmp/x.wav")
            .code == 2);
  CHECK(run_cli("simulate --room " + room_file() +
                " --method warp -o /tmp/x.wav")
            .code == 2);
  CHECK(run_cli("bench --mode bogus").code == 2);
  CHECK(run_cli("simulate --room " + room_file() + " --method ism").code == 2);
}

TEST_CASE("cli: help lists the documented flags") {
  RunResult top = run_cli("--help");
  CHECK(top.code == 0);
  for (const char* sub : {"simulate", "mix", "bench", "materials", "filters"})
    CHECK(top.out.find(sub) != std::string::npos);

  RunResult sim = run_cli("simulate --help");
  CHECK(sim.code == 0);
  for (const char* flag :
       {"--room", "--method", "--ism-order", "--rays", "--seed", "--air",
        "--mat", "--multiband", "--bin-width", "--max-time", "--threads",
        "--source", "--receiver", "--format", "--dump-histogram"})
    CHECK(sim.out.find(flag) != std::string::npos);
}

TEST_CASE("cli: mix renders a far-field scene") {
  const double fs = 16000;
  std::vector<double> speech(3200), noise(3200);
  for (int i = 0; i < 3200; ++i) {
    speech[i] = 0.4 * std::sin(0.07 * i);
    noise[i] = 0.3 * std::cos(0.013 * i);
  }
  const std::string speech_path = temp_path("roomsim_cli_speech.wav");
  const std::string noise_path = temp_path("roomsim_cli_noise.wav");
  roomsim::write_wav(speech_path, speech, fs, roomsim::WavFormat::Float32);
  roomsim::write_wav(noise_path, noise, fs, roomsim::WavFormat::Float32);

  const std::string out = temp_path("roomsim_cli_mix.wav");
  RunResult r = run_cli("mix --room " + room_file() + " --target " +
                        speech_path + " --noise " + noise_path +
                        " --noise-source 1 --snr 5 --method ism --ism-order 2" +
                        " --seed 5 -o " + out);
  CHECK(r.code == 0);
  roomsim::WavData mixed = roomsim::read_wav(out);
  CHECK(mixed.samples.size() >= speech.size());

  RunResult no_noise = run_cli("mix --room " + room_file() + " --target " +
                               speech_path + " --method ism --ism-order 2 -o " +
                               out);
  CHECK(no_noise.code == 0);

  std::remove(speech_path.c_str());
  std::remove(noise_path.c_str());
  std::remove(out.c_str());
}

TEST_CASE("cli: sample-rate mismatches name both rates") {
  std::vector<double> speech(100, 0.25);
  const std::string speech_path = temp_path("roomsim_cli_441.wav");
  roomsim::write_wav(speech_path, speech, 44100, roomsim::WavFormat::Float32);
  RunResult r = run_cli("mix --room " + room_file() + " --target " +
                        speech_path + " --method ism --ism-order 1 -o /tmp/x.wav");
  CHECK(r.code != 0);
  CHECK(r.err.find("44100") != std::string::npos);
  CHECK(r.err.find("16000") != std::string::npos);
  std::remove(speech_path.c_str());
}

TEST_CASE("cli: materials subcommand lists and inspects the database") {
  RunResult list = run_cli("materials --materials " + kMaterials);
  CHECK(list.code == 0);
  CHECK(list.out.find("brick_wall") != std::string::npos);

  RunResult one = run_cli("materials --materials " + kMaterials +
                          " --name brick_wall");
  CHECK(one.code == 0);
  CHECK(one.out.find("absorption") != std::string::npos);

  RunResult missing = run_cli("materials --materials " + kMaterials +
                              " --name unobtainium");
  CHECK(missing.code == 3);
}

TEST_CASE("cli: filter responses dump covers the configured bands") {
  const std::string csv = temp_path("roomsim_cli_filters.csv");
  RunResult r = run_cli("filters --fs 16000 -o " + csv);
  CHECK(r.code == 0);
  std::string text = slurp(csv);
  CHECK(text.find("freq_hz") != std::string::npos);
  CHECK(text.find("mag_db_8000") != std::string::npos);

  RunResult low = run_cli("filters --fs 8000 -o " + csv);
  CHECK(low.code == 0);
  std::string low_text = slurp(csv);
  CHECK(low_text.find("mag_db_8000") == std::string::npos);
  CHECK(low_text.find("mag_db_4000") != std::string::npos);
  std::remove(csv.c_str());
}
