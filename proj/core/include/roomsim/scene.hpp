// Copyright 2026 The roomsim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ROOMSIM_SCENE_HPP
#define ROOMSIM_SCENE_HPP

#include <array>
#include <string>
#include <vector>

#include "roomsim/vec.hpp"

namespace roomsim {

class MaterialDb;

// Surfaces of an axis-aligned shoebox with the origin at one corner.
// west/east bound x, south/north bound y, floor/ceiling bound z.
// Index layout: 2*axis + side, side 0 at coordinate 0, side 1 at L.
enum SurfaceIndex {
  kWest = 0,
  kEast = 1,
  kSouth = 2,
  kNorth = 3,
  kFloor = 4,
  kCeiling = 5,
};

extern const std::array<const char*, 6> kSurfaceNames;

struct SurfaceSpec {
  std::string material;       // material db reference; empty = scalar mode
  double absorption = 0.1;    // used when material is empty
  double scattering = 0.0;

  bool operator==(const SurfaceSpec&) const = default;
};

struct EnvSpec {
  double temperature_c = 20.0;
  double humidity_pct = 50.0;
  double sample_rate = 16000.0;

  bool operator==(const EnvSpec&) const = default;
};

struct SourceSpec {
  Vec3 position;
};

struct ReceiverSpec {
  Vec3 position;
  double radius = 0.5;
};

struct RoomSpec {
  Vec3 dimensions;  // Lx, Ly, Lz in meters
  std::array<SurfaceSpec, 6> surfaces;
  std::vector<SourceSpec> sources;
  std::vector<ReceiverSpec> receivers;
  EnvSpec environment;

  double volume() const { return dimensions.x * dimensions.y * dimensions.z; }
  double surface_area() const {
    return 2.0 * (dimensions.x * dimensions.y + dimensions.x * dimensions.z +
                  dimensions.y * dimensions.z);
  }
};

double speed_of_sound(const EnvSpec& env);

// Parses and validates a YAML room description. A material database is
// required to resolve surface material references; pass nullptr to skip
// reference checking (scalar-absorption rooms only).
RoomSpec parse_room(const std::string& path, const MaterialDb* db = nullptr);
RoomSpec parse_room_text(const std::string& text, const MaterialDb* db = nullptr);
std::string serialize_room(const RoomSpec& room);

// Throws Error on any invariant violation.
void validate_room(const RoomSpec& room, const MaterialDb* db = nullptr);

bool rooms_equal(const RoomSpec& a, const RoomSpec& b, double tol = 1e-12);

}  // namespace roomsim

#endif  // ROOMSIM_SCENE_HPP
