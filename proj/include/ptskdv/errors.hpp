// Error taxonomy shared by the symbolic kernel and the numeric engine.
#pragma once

#include <stdexcept>
#include <string>

namespace ptskdv {

// Ill-formed algebraic construction (odd power base, nested formal power, ...).
struct MalformedExpression : std::runtime_error {
  explicit MalformedExpression(const std::string& what) : std::runtime_error(what) {}
};

// A transform or operator applied outside its domain.
struct UnsupportedTransform : std::runtime_error {
  explicit UnsupportedTransform(const std::string& what) : std::runtime_error(what) {}
};

// Numeric evaluation hit a non-invertible body for a non-integer power.
struct SingularConfiguration : std::runtime_error {
  explicit SingularConfiguration(const std::string& what, long long index = -1)
      : std::runtime_error(what), grid_index(index) {}
  long long grid_index;
};

// Simulation state stopped being finite.
struct BlowUpError : std::runtime_error {
  explicit BlowUpError(const std::string& what, double when) : std::runtime_error(what), t(when) {}
  double t;
};

// Bad user input: config files, CLI values, malformed trajectories.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ptskdv
