// Copyright 2026 The roomsim authors
// SPDX-License-Identifier: Apache-2.0

#include "roomsim/scene.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "roomsim/error.hpp"
#include "roomsim/materials.hpp"

namespace roomsim {

const std::array<const char*, 6> kSurfaceNames = {
    "west", "east", "south", "north", "floor", "ceiling"};

double speed_of_sound(const EnvSpec& env) {
  return 331.4 + 0.6 * env.temperature_c;
}

namespace {

[[noreturn]] void schema_fail(const std::string& msg) {
  throw Error(ErrorKind::Schema, "room spec: " + msg);
}

double require_double(const YAML::Node& node, const std::string& name) {
  if (!node || !node.IsScalar()) schema_fail("missing or non-scalar field '" + name + "'");
  try {
    return node.as<double>();
  } catch (const YAML::Exception&) {
    schema_fail("field '" + name + "' is not a number");
  }
}

Vec3 require_vec3(const YAML::Node& node, const std::string& name) {
  if (!node || !node.IsSequence() || node.size() != 3)
    schema_fail("field '" + name + "' must be a list of 3 numbers");
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    try {
      v[i] = node[i].as<double>();
    } catch (const YAML::Exception&) {
      schema_fail("field '" + name + "' must be a list of 3 numbers");
    }
  }
  return v;
}

SurfaceSpec parse_surface(const YAML::Node& node, const std::string& name) {
  if (!node || !node.IsMap()) schema_fail("surface '" + name + "' must be a map");
  SurfaceSpec s;
  bool has_material = static_cast<bool>(node["material"]);
  bool has_absorption = static_cast<bool>(node["absorption"]);
  if (has_material == has_absorption)
    schema_fail("surface '" + name + "' needs exactly one of 'material' or 'absorption'");
  if (has_material) {
    s.material = node["material"].as<std::string>();
    s.absorption = 0.0;
  } else {
    s.absorption = require_double(node["absorption"], name + ".absorption");
  }
  if (node["scattering"])
    s.scattering = require_double(node["scattering"], name + ".scattering");
  return s;
}

bool inside_box(const Vec3& p, const Vec3& dims, double margin) {
  for (int d = 0; d < 3; ++d) {
    if (p[d] <= margin || p[d] >= dims[d] - margin) return false;
  }
  return true;
}

}  // namespace

RoomSpec parse_room_text(const std::string& text, const MaterialDb* db) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    schema_fail(std::string("YAML parse failure: ") + e.what());
  }
  if (!root.IsMap()) schema_fail("top level must be a map");

  RoomSpec room;
  room.dimensions = require_vec3(root["dimensions"], "dimensions");
  room.environment.temperature_c = require_double(root["temperature_c"], "temperature_c");
  room.environment.humidity_pct = require_double(root["humidity_pct"], "humidity_pct");
  room.environment.sample_rate = require_double(root["sample_rate"], "sample_rate");

  const YAML::Node surfaces = root["surfaces"];
  if (!surfaces || !surfaces.IsMap()) schema_fail("missing 'surfaces' map");
  std::set<std::string> known(kSurfaceNames.begin(), kSurfaceNames.end());
  for (const auto& kv : surfaces) {
    if (!known.count(kv.first.as<std::string>()))
      schema_fail("unknown surface '" + kv.first.as<std::string>() + "'");
  }
  for (int i = 0; i < 6; ++i) {
    room.surfaces[i] = parse_surface(surfaces[kSurfaceNames[i]], kSurfaceNames[i]);
  }

  const YAML::Node sources = root["sources"];
  if (!sources || !sources.IsSequence()) schema_fail("missing 'sources' list");
  for (const auto& s : sources) {
    room.sources.push_back({require_vec3(s["position"], "sources[].position")});
  }

  const YAML::Node receivers = root["receivers"];
  if (!receivers || !receivers.IsSequence()) schema_fail("missing 'receivers' list");
  for (const auto& r : receivers) {
    ReceiverSpec spec;
    spec.position = require_vec3(r["position"], "receivers[].position");
    if (r["radius"]) spec.radius = require_double(r["radius"], "receivers[].radius");
    room.receivers.push_back(spec);
  }

  validate_room(room, db);
  return room;
}

RoomSpec parse_room(const std::string& path, const MaterialDb* db) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open room spec: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_room_text(ss.str(), db);
}

void validate_room(const RoomSpec& room, const MaterialDb* db) {
  for (int d = 0; d < 3; ++d) {
    if (!(room.dimensions[d] > 0.0))
      throw Error(ErrorKind::Geometry, "room dimensions must be positive");
  }
  const EnvSpec& env = room.environment;
  if (env.temperature_c < -20.0 || env.temperature_c > 50.0)
    throw Error(ErrorKind::Schema, "temperature_c out of range [-20, 50]");
  if (env.humidity_pct < 0.0 || env.humidity_pct > 100.0)
    throw Error(ErrorKind::Schema, "humidity_pct out of range [0, 100]");
  static const std::set<double> kRates = {8000.0, 16000.0, 44100.0, 48000.0};
  if (!kRates.count(env.sample_rate))
    throw Error(ErrorKind::Schema, "sample_rate must be one of 8000, 16000, 44100, 48000");

  for (int i = 0; i < 6; ++i) {
    const SurfaceSpec& s = room.surfaces[i];
    if (s.material.empty()) {
      if (s.absorption < 0.0 || s.absorption > 1.0)
        throw Error(ErrorKind::Schema, std::string("surface '") + kSurfaceNames[i] +
                                           "': absorption out of [0, 1]");
    } else if (db && !db->contains(s.material)) {
      throw Error(ErrorKind::Material, std::string("surface '") + kSurfaceNames[i] +
                                           "': unknown material '" + s.material + "'");
    }
    if (s.scattering < 0.0 || s.scattering > 1.0)
      throw Error(ErrorKind::Schema, std::string("surface '") + kSurfaceNames[i] +
                                         "': scattering out of [0, 1]");
  }

  if (room.sources.empty())
    throw Error(ErrorKind::Geometry, "room needs at least one source");
  if (room.receivers.empty())
    throw Error(ErrorKind::Geometry, "room needs at least one receiver");
  for (const SourceSpec& s : room.sources) {
    if (!inside_box(s.position, room.dimensions, 0.0))
      throw Error(ErrorKind::Geometry, "source position outside the room");
  }
  for (const ReceiverSpec& r : room.receivers) {
    if (!(r.radius > 0.0))
      throw Error(ErrorKind::Geometry, "receiver radius must be positive");
    if (!inside_box(r.position, room.dimensions, r.radius))
      throw Error(ErrorKind::Geometry, "receiver sphere extends outside the room");
  }
}

std::string serialize_room(const RoomSpec& room) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "dimensions" << YAML::Value << YAML::Flow << YAML::BeginSeq
      << room.dimensions.x << room.dimensions.y << room.dimensions.z << YAML::EndSeq;
  out << YAML::Key << "temperature_c" << YAML::Value << room.environment.temperature_c;
  out << YAML::Key << "humidity_pct" << YAML::Value << room.environment.humidity_pct;
  out << YAML::Key << "sample_rate" << YAML::Value << room.environment.sample_rate;
  out << YAML::Key << "surfaces" << YAML::Value << YAML::BeginMap;
  for (int i = 0; i < 6; ++i) {
    const SurfaceSpec& s = room.surfaces[i];
    out << YAML::Key << kSurfaceNames[i] << YAML::Value << YAML::Flow << YAML::BeginMap;
    if (!s.material.empty()) {
      out << YAML::Key << "material" << YAML::Value << s.material;
    } else {
      out << YAML::Key << "absorption" << YAML::Value << s.absorption;
    }
    out << YAML::Key << "scattering" << YAML::Value << s.scattering;
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  out << YAML::Key << "sources" << YAML::Value << YAML::BeginSeq;
  for (const SourceSpec& s : room.sources) {
    out << YAML::BeginMap << YAML::Key << "position" << YAML::Value << YAML::Flow
        << YAML::BeginSeq << s.position.x << s.position.y << s.position.z
        << YAML::EndSeq << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "receivers" << YAML::Value << YAML::BeginSeq;
  for (const ReceiverSpec& r : room.receivers) {
    out << YAML::BeginMap << YAML::Key << "position" << YAML::Value << YAML::Flow
        << YAML::BeginSeq << r.position.x << r.position.y << r.position.z
        << YAML::EndSeq;
    out << YAML::Key << "radius" << YAML::Value << r.radius << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

bool rooms_equal(const RoomSpec& a, const RoomSpec& b, double tol) {
  auto close = [tol](double x, double y) { return std::fabs(x - y) <= tol; };
  auto vclose = [&](const Vec3& x, const Vec3& y) {
    return close(x.x, y.x) && close(x.y, y.y) && close(x.z, y.z);
  };
  if (!vclose(a.dimensions, b.dimensions)) return false;
  if (!close(a.environment.temperature_c, b.environment.temperature_c) ||
      !close(a.environment.humidity_pct, b.environment.humidity_pct) ||
      !close(a.environment.sample_rate, b.environment.sample_rate))
    return false;
  for (int i = 0; i < 6; ++i) {
    if (a.surfaces[i].material != b.surfaces[i].material) return false;
    if (!close(a.surfaces[i].absorption, b.surfaces[i].absorption)) return false;
    if (!close(a.surfaces[i].scattering, b.surfaces[i].scattering)) return false;
  }
  if (a.sources.size() != b.sources.size() || a.receivers.size() != b.receivers.size())
    return false;
  for (size_t i = 0; i < a.sources.size(); ++i) {
    if (!vclose(a.sources[i].position, b.sources[i].position)) return false;
  }
  for (size_t i = 0; i < a.receivers.size(); ++i) {
    if (!vclose(a.receivers[i].position, b.receivers[i].position)) return false;
    if (!close(a.receivers[i].radius, b.receivers[i].radius)) return false;
  }
  return true;
}

}  // namespace roomsim
