#pragma once

#include <stdexcept>
#include <string>

namespace qkr {

// Base class for all library errors.
struct error : std::runtime_error {
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid parameters or configuration (maps to CLI exit code 2).
struct validation_error : error {
  using error::error;
};

// Argument outside an operation's domain (e.g. step index past an
// explicit schedule).
struct domain_error : error {
  using error::error;
};

// Lattice or grid resource limits exceeded.
struct resource_error : error {
  using error::error;
};

// Requested halfwidth too small to hold the propagated support.
struct truncation_error : error {
  using error::error;
};

// Spectral grid too small for the occupied lattice plus kick band.
struct aliasing_error : error {
  using error::error;
};

// Numerical failure during evolution (norm blow-up; CLI exit code 3).
struct numeric_error : error {
  using error::error;
};

// Degenerate input to the exponent fit.
struct fit_error : error {
  using error::error;
};

}  // namespace qkr
