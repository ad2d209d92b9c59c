// Copyright 2026 The roomsim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ROOMSIM_ERROR_HPP
#define ROOMSIM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace roomsim {

// Broad failure categories; the CLI maps these onto process exit codes.
enum class ErrorKind {
  Schema,      // malformed or mistyped input document
  Geometry,    // positions or dimensions violate room invariants
  Material,    // unknown material reference or bad coefficient data
  Config,      // inconsistent simulation configuration
  Io,          // file system or encoding failure
  Simulation,  // numerical failure during simulation
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace roomsim

#endif  // ROOMSIM_ERROR_HPP
