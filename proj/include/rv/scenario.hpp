#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rv/report.hpp"
#include "rv/shapes.hpp"

namespace rv {

// Tensor preset for T or S.  "file" loads per-triangle rows "t a11 a12 a22"
// given in each triangle's chart frame.
struct TensorSpec {
  std::string kind = "identity";  // identity | scaled | newton | file
  double scale = 1.0;             // for "scaled"
  int r = 1;                      // Newton tensor order, 0 or 1
  std::string file;               // for "file"
  std::string label() const;
};

// One scenario: a mesh, a density, tensor presets, the problems to solve,
// and the checks to run.  Parsed from a flat key = value file with bracketed
// sections:
//
//   # comment                       (anywhere; blank lines ignored)
//   id = sphere_unit                (top level, before any section)
//   [mesh]
//   shape = round_sphere            (or: file = path/to.wmesh)
//   radius = 1.0                    (shape parameters as applicable:
//   refine = 4                       radius, a, b, c, rho, r0, r1,
//   density = zero                   refine, jitter, seed)
//   density_coeff = 1.0             (density: zero | linear | quadratic)
//   [tensors]
//   T = identity                    (identity | scaled | newton | file)
//   T_scale = 2.0                   (T_r for newton, T_file for file;
//   S = identity                     same keys with the S_ prefix)
//   [problems]
//   run = closed                    (subset of: closed, steklov, wentzell)
//   wentzell_b = 0.5, 2             (required when wentzell is run)
//   [checks]
//   bounds = all                    (or a comma-separated id list)
//   identities = all
//   [tolerances]
//   equality_tol = 0.02
//   hold_tol = 1e-9
//   identity_tol = 1e-3
//
// Unknown sections or keys are errors (fail-fast typo detection).
struct ScenarioConfig {
  std::string id;
  ShapeSpec shape;        // used when mesh_file is empty
  std::string mesh_file;  // alternative mesh source
  bool density_override = false;  // apply shape.density to a file mesh
  TensorSpec T, S;
  bool run_closed = false;
  bool run_steklov = false;
  std::vector<double> wentzell_b;
  std::vector<std::string> bound_filter;     // empty = all applicable
  std::vector<std::string> identity_filter;  // empty = all applicable
  Tolerances tol;
};

// Parses config text; throws ConfigError with a line number on bad input.
// fallback_id names the scenario when the file does not set one.
ScenarioConfig parse_scenario(const std::string& text, const std::string& fallback_id);

// Reads and parses a config file, then verifies every referenced file
// exists and parses, before any solve could start.
ScenarioConfig load_scenario(const std::string& path);

// Everything a scenario run produces.  Matrices are kept for optional
// coordinate-format dumps.
struct ScenarioOutcome {
  ScenarioConfig config;
  ScenarioReport report;
  AssembledSystem system;
  bool boundary_system = false;  // system includes boundary matrices
};

// Runs mesh generation, assembly, solves, bound evaluation, and identity
// checks for one scenario.  Pure function of the config: byte-identical
// reports across repeated runs.
ScenarioOutcome run_scenario(const ScenarioConfig& cfg);

// Writes <id>.report.json, <id>.summary.csv, and <id>.meta.json (timestamp
// sidecar) into out_dir, plus <id>.<name>.coo matrix dumps when requested.
// Creates out_dir if needed; returns the paths written.
std::vector<std::string> write_outputs(const ScenarioOutcome& outcome,
                                       const std::string& out_dir, bool dump_matrices);

// Suite exit policy: 0 when every non-finding check holds, 1 otherwise.
int scenario_exit_code(const ScenarioReport& report);

}  // namespace rv
