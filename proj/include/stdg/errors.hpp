#pragma once

#include <stdexcept>
#include <string>

namespace stdg {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input files (mesh, config).
struct ParseError : Error {
  using Error::Error;
};

// Invalid geometry (non-simple polygons, degenerate elements, ...).
struct GeometryError : Error {
  using Error::Error;
};

// Invalid run configuration; message carries the offending field path.
struct ConfigError : Error {
  using Error::Error;
};

struct AssemblyError : Error {
  using Error::Error;
};

// Gram matrix of the raw monomial set is numerically singular.
struct ConditioningError : Error {
  using Error::Error;
};

// Linear solver breakdown / non-convergence.
struct SolverError : Error {
  using Error::Error;
};

// Point outside the computational domain.
struct LocationError : Error {
  using Error::Error;
};

}  // namespace stdg
