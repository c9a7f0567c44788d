#pragma once

#include <string>
#include <vector>

#include "rv/assembly.hpp"
#include "rv/bounds.hpp"
#include "rv/spectra.hpp"

namespace rv {

// Provenance of the mesh a scenario ran on: enough to regenerate it.
struct MeshProvenance {
  std::string shape;    // builtin kind, or "file" for parsed meshes
  std::string source;   // parameter summary, or the file path
  double delta = 0.0;
  int refine = 0;                 // 0 for file meshes
  int vertices = 0;
  int triangles = 0;
  int boundary_loops = 0;
  double mean_edge_length = 0.0;
  double volume = 0.0;            // weighted area
  double boundary_volume = 0.0;   // weighted boundary length (0 when closed)
  std::string density = "zero";
  double jitter = 0.0;
  unsigned long long seed = 0;
};

// One solved spectrum, flattened for serialization.
struct SpectrumEntry {
  std::string problem;  // "closed" | "steklov" | "wentzell b=<b>"
  double eigenvalue = 0.0;
  double residual = 0.0;
  double deflation = 0.0;
  std::vector<double> next;  // following eigenvalues, ascending
};

// Full outcome of one scenario run; the JSON document mirrors this struct.
struct ScenarioReport {
  std::string scenario;
  MeshProvenance mesh;
  std::string tensor_T = "identity";
  std::string tensor_S = "identity";
  Tolerances tol;
  std::vector<SpectrumEntry> spectra;
  std::vector<BoundReport> bounds;
  std::vector<IdentityReport> identities;
  std::vector<std::string> warnings;
};

// Identifiers of finding-class violations: documented literal-reading
// failures that are reported but do not fail the suite.
std::vector<std::string> finding_ids(const ScenarioReport& rep);

// False iff some non-finding bound or identity has status "violated".
bool suite_passes(const ScenarioReport& rep);

// Deterministic JSON document: insertion-ordered keys, no timestamps, all
// reductions already performed in fixed order by the evaluators.
std::string report_json(const ScenarioReport& rep);

// CSV summary for plotting: header "bound_id,lhs,rhs,slack,status", one row
// per bound report (the variant is folded into the id as "ID[variant]").
std::string report_csv(const ScenarioReport& rep);

// Sidecar document for volatile metadata (timestamps), kept out of the main
// report so that byte-identical reruns can be asserted on the report itself.
std::string report_sidecar_json(const ScenarioReport& rep, const std::string& timestamp);

// Coordinate-format dump of a sparse matrix: one "row col value" triple per
// stored entry, 0-based indices, column-major traversal order.
std::string matrix_coo(const Sparse& m);

}  // namespace rv
