// Copyright 2026 The roomsim authors
// SPDX-License-Identifier: Apache-2.0

#include "roomsim/materials.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "roomsim/error.hpp"

namespace roomsim {

const BandScheme& default_band_scheme() {
  static const BandScheme scheme{
      {125.0, 250.0, 500.0, 1000.0, 2000.0, 4000.0, 8000.0}};
  return scheme;
}

namespace {

std::vector<double> parse_coeff_list(const YAML::Node& node,
                                     const std::string& name, int n_bands) {
  if (!node.IsSequence() || static_cast<int>(node.size()) != n_bands)
    throw Error(ErrorKind::Material,
                "material '" + name + "': expected " + std::to_string(n_bands) +
                    " per-band coefficients");
  std::vector<double> v;
  for (const auto& item : node) {
    double c = item.as<double>();
    if (c < 0.0 || c > 1.0)
      throw Error(ErrorKind::Material,
                  "material '" + name + "': coefficient out of [0, 1]");
    v.push_back(c);
  }
  return v;
}

}  // namespace

MaterialDb MaterialDb::load_text(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw Error(ErrorKind::Material, std::string("material db parse failure: ") + e.what());
  }
  if (!root.IsMap())
    throw Error(ErrorKind::Material, "material db top level must be a map");

  MaterialDb db;
  db.band_count_ = static_cast<int>(default_band_scheme().center_frequencies.size());
  for (const auto& kv : root) {
    Material m;
    m.name = kv.first.as<std::string>();
    const YAML::Node& body = kv.second;
    if (!body.IsMap() || !body["absorption"])
      throw Error(ErrorKind::Material, "material '" + m.name + "': missing absorption");
    m.absorption = parse_coeff_list(body["absorption"], m.name, db.band_count_);
    if (body["scattering"])
      m.scattering = parse_coeff_list(body["scattering"], m.name, db.band_count_);
    if (body["source"]) m.source = body["source"].as<std::string>();
    db.materials_[m.name] = std::move(m);
  }
  return db;
}

MaterialDb MaterialDb::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open material db: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_text(ss.str());
}

const Material& MaterialDb::lookup(const std::string& name) const {
  auto it = materials_.find(name);
  if (it == materials_.end())
    throw Error(ErrorKind::Material, "unknown material: " + name);
  return it->second;
}

bool MaterialDb::contains(const std::string& name) const {
  return materials_.count(name) > 0;
}

std::vector<std::string> MaterialDb::names() const {
  std::vector<std::string> out;
  out.reserve(materials_.size());
  for (const auto& kv : materials_) out.push_back(kv.first);
  return out;
}

double eyring_absorption(double volume, double surface_area, double rt60) {
  if (!(volume > 0.0) || !(surface_area > 0.0) || !(rt60 > 0.0))
    throw Error(ErrorKind::Config, "eyring_absorption needs positive V, S, rt60");
  constexpr double kEps = 1e-9;
  double alpha = 1.0 - std::exp(-0.161 * volume / (surface_area * rt60));
  if (alpha > 1.0 - kEps)
    throw Error(ErrorKind::Config,
                "unreachable rt60: required absorption exceeds 1 for this room");
  if (alpha < kEps) alpha = kEps;
  return alpha;
}

double eyring_rt60(double volume, double surface_area, double mean_alpha) {
  if (mean_alpha <= 0.0 || mean_alpha >= 1.0) return 0.0;
  return 0.161 * volume / (-surface_area * std::log(1.0 - mean_alpha));
}

SurfaceCoeffs resolve_surface_coeffs(const RoomSpec& room, const MaterialDb* db,
                                     bool multiband) {
  const int n_bands =
      multiband ? static_cast<int>(default_band_scheme().center_frequencies.size()) : 1;
  // In single-band mode, materials collapse to their 1 kHz coefficient.
  const int collapse_band = 3;

  SurfaceCoeffs out;
  out.n_bands = n_bands;
  for (int i = 0; i < 6; ++i) {
    const SurfaceSpec& s = room.surfaces[i];
    std::vector<double> alpha(n_bands), scat(n_bands, s.scattering);
    if (s.material.empty()) {
      std::fill(alpha.begin(), alpha.end(), s.absorption);
    } else {
      if (!db)
        throw Error(ErrorKind::Material,
                    "surface references material '" + s.material +
                        "' but no material db was provided");
      const Material& m = db->lookup(s.material);
      for (int b = 0; b < n_bands; ++b)
        alpha[b] = n_bands == 1 ? m.absorption[collapse_band] : m.absorption[b];
      if (!m.scattering.empty()) {
        for (int b = 0; b < n_bands; ++b)
          scat[b] = n_bands == 1 ? m.scattering[collapse_band] : m.scattering[b];
      }
    }
    out.absorption[i] = std::move(alpha);
    out.scattering[i] = std::move(scat);
  }
  return out;
}

double mean_absorption(const RoomSpec& room, const SurfaceCoeffs& coeffs) {
  const Vec3& L = room.dimensions;
  const double areas[6] = {L.y * L.z, L.y * L.z, L.x * L.z,
                           L.x * L.z, L.x * L.y, L.x * L.y};
  double num = 0.0, den = 0.0;
  for (int i = 0; i < 6; ++i) {
    num += areas[i] * coeffs.absorption[i][0];
    den += areas[i];
  }
  return num / den;
}

}  // namespace roomsim
