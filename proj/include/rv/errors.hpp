#pragma once

#include <stdexcept>
#include <string>

namespace rv {

// Base class for all library errors.  Catch this at the CLI boundary.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Geometric input outside the admissible domain of an operation
// (antipodal points, non-tangent vectors, off-model points, ...).
struct DomainError : Error {
  using Error::Error;
};

// Structural problems with a mesh: non-manifold edges, orientation
// mismatches, degenerate triangles, bad indices.
struct ValidationError : Error {
  using Error::Error;
};

// Text input (mesh files, config files) that cannot be parsed.
struct ParseError : Error {
  ParseError(const std::string& msg, int line_no = 0)
      : Error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg : msg),
        line(line_no) {}
  int line = 0;
};

// Invalid scenario configuration (unknown keys, bad ranges, missing files).
struct ConfigError : Error {
  using Error::Error;
};

// Numerical solver failures: non-convergence, indefinite matrices,
// factorization breakdown.
struct SolveError : Error {
  using Error::Error;
};

}  // namespace rv
