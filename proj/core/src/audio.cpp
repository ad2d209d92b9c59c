// Copyright 2026 The roomsim authors
// SPDX-License-Identifier: Apache-2.0

#include "roomsim/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "roomsim/error.hpp"

namespace roomsim {

namespace {

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint16_t get_u16(const std::string& s, std::size_t off) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(s[off]) |
                                    (static_cast<unsigned char>(s[off + 1]) << 8));
}

std::uint32_t get_u32(const std::string& s, std::size_t off) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i)
    v = (v << 8) | static_cast<unsigned char>(s[off + i]);
  return v;
}

}  // namespace

void write_wav(const std::string& path, const std::vector<double>& samples,
               double fs, WavFormat format) {
  const std::uint32_t rate = static_cast<std::uint32_t>(std::llround(fs));
  const std::uint16_t bits = format == WavFormat::Pcm16 ? 16 : 32;
  const std::uint16_t block = bits / 8;
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(samples.size()) * block;

  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put_u32(out, 36 + data_bytes);
  out += "WAVE";
  out += "fmt ";
  put_u32(out, 16);
  put_u16(out, format == WavFormat::Pcm16 ? 1 : 3);
  put_u16(out, 1);  // mono
  put_u32(out, rate);
  put_u32(out, rate * block);
  put_u16(out, block);
  put_u16(out, bits);
  out += "data";
  put_u32(out, data_bytes);

  if (format == WavFormat::Pcm16) {
    for (double v : samples) {
      const double clipped = std::clamp(v, -1.0, 32767.0 / 32768.0);
      const auto s = static_cast<std::int16_t>(std::lround(clipped * 32768.0));
      put_u16(out, static_cast<std::uint16_t>(s));
    }
  } else {
    for (double v : samples) {
      const float f = static_cast<float>(v);
      std::uint32_t u;
      std::memcpy(&u, &f, 4);
      put_u32(out, u);
    }
  }

  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw Error(ErrorKind::Io, "short write to '" + path + "'");
}

WavData read_wav(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  std::string buf((std::istreambuf_iterator<char>(file)),
                  std::istreambuf_iterator<char>());
  if (buf.size() < 44 || buf.compare(0, 4, "RIFF") != 0 ||
      buf.compare(8, 4, "WAVE") != 0)
    throw Error(ErrorKind::Io, "'" + path + "' is not a RIFF/WAVE file");

  std::uint16_t fmt_code = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::size_t data_off = 0, data_len = 0;
  std::size_t pos = 12;
  while (pos + 8 <= buf.size()) {
    const std::string id = buf.substr(pos, 4);
    const std::uint32_t len = get_u32(buf, pos + 4);
    if (id == "fmt " && pos + 8 + 16 <= buf.size()) {
      fmt_code = get_u16(buf, pos + 8);
      channels = get_u16(buf, pos + 10);
      rate = get_u32(buf, pos + 12);
      bits = get_u16(buf, pos + 22);
    } else if (id == "data") {
      data_off = pos + 8;
      data_len = std::min<std::size_t>(len, buf.size() - data_off);
    }
    pos += 8 + len + (len & 1);
  }
  if (rate == 0 || data_off == 0)
    throw Error(ErrorKind::Io, "'" + path + "' lacks fmt or data chunk");
  if (channels != 1)
    throw Error(ErrorKind::Io, "'" + path + "' is not mono");

  WavData wav;
  wav.fs = static_cast<double>(rate);
  if (fmt_code == 1 && bits == 16) {
    wav.format = WavFormat::Pcm16;
    const std::size_t n = data_len / 2;
    wav.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto s = static_cast<std::int16_t>(get_u16(buf, data_off + 2 * i));
      wav.samples[i] = s / 32768.0;
    }
  } else if (fmt_code == 3 && bits == 32) {
    wav.format = WavFormat::Float32;
    const std::size_t n = data_len / 4;
    wav.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t u = get_u32(buf, data_off + 4 * i);
      float f;
      std::memcpy(&f, &u, 4);
      wav.samples[i] = f;
    }
  } else {
    throw Error(ErrorKind::Io,
                "'" + path + "' has an unsupported sample format");
  }
  return wav;
}

void write_rir_sidecar(const std::string& wav_path, const Rir& rir) {
  char hash_hex[17];
  std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                static_cast<unsigned long long>(rir.meta.config_hash));
  nlohmann::ordered_json j;
  j["method"] = rir.meta.method;
  j["seed"] = rir.meta.seed;
  j["bands"] = rir.meta.bands;
  j["config_hash"] = hash_hex;
  j["sample_rate"] = rir.fs;
  j["length"] = rir.samples.size();

  const std::string path = wav_path + ".json";
  std::ofstream file(path);
  if (!file) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  file << j.dump(2) << "\n";
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace roomsim
