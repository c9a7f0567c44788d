#pragma once

#include <map>
#include <string>
#include <vector>

#include "rv/curvature.hpp"
#include "rv/mesh.hpp"
#include "rv/spectra.hpp"

namespace rv {

// Tolerances used when classifying an inequality report.  All comparisons
// happen after normalizing the slack by max(|lhs|, |rhs|, 1e-30).
struct Tolerances {
  double equality_tol = 0.02;  // |slack| below this => equality_within_tol
  double hold_tol = 1e-9;      // slack >= -hold_tol  => holds
  double identity_tol = 1e-3;  // residual ceiling for identity checks
};

// Status classification with equality taking precedence over a plain hold.
std::string classify(double lhs, double rhs, const Tolerances& tol);

// Intrinsic center of mass of a mesh under its weighted measure: the fixed
// point of p <- exp_p( sum_v w_v (s(r_v)/r_v) log_p(x_v) / V ), seeded with
// the projected extrinsic mean.
struct CenterOfMass {
  Vec point;
  double defect = 0.0;  // norm of the final update, normalized
  int iterations = 0;
  double max_radius = 0.0;  // max geodesic distance from point to a vertex
};

CenterOfMass center_of_mass(const ImmersedMesh& mesh);

// Largest geodesic distance from p to any vertex of the mesh.
double enclosing_radius(const ImmersedMesh& mesh, const Vec& p);

struct Hypothesis {
  std::string name;
  bool pass = true;
  std::string note;
};

// One evaluated inequality: lhs <= rhs with slack = rhs - lhs.
struct BoundReport {
  std::string bound_id;
  std::string variant;       // distinguishes sub-cases sharing a bound_id
  std::string problem_kind;  // "closed" | "steklov" | "wentzell"
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  std::string status;  // holds | equality_within_tol | violated | hypotheses_unmet
  bool finding = false;
  std::vector<Hypothesis> hypotheses;
  std::map<std::string, double> terms;  // named intermediate quantities
};

// One evaluated equality / pointwise inequality from the supporting chain.
// residual is normalized so that the check holds iff residual <= tol.
struct IdentityReport {
  std::string identity_id;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  std::string status;
  std::string locus;  // worst vertex / triangle for pointwise checks
  std::string note;   // conventions, margins, or unmet-hypothesis reasons
  bool finding = false;
};

// Everything needed to evaluate the closed-manifold bounds for one scenario.
struct ClosedInputs {
  const ImmersedMesh* mesh = nullptr;
  const WeightedMeasures* measures = nullptr;
  const CurvatureField* field = nullptr;
  const TangentTensorField* T = nullptr;
  const TangentTensorField* S = nullptr;
  const DriftField* drift_T = nullptr;
  const DriftField* drift_S = nullptr;
  const SpectralResult* spectrum = nullptr;  // first closed eigenvalue
  Tolerances tol;
};

// Everything needed for the boundary-value bounds of one scenario.
struct BoundaryInputs {
  const ImmersedMesh* omega = nullptr;          // surface with boundary
  const ImmersedMesh* curve = nullptr;          // its boundary complex
  const WeightedMeasures* measures = nullptr;   // of omega
  const WeightedMeasures* curve_measures = nullptr;
  const CurvatureField* field = nullptr;        // curvature of omega
  const TangentTensorField* T = nullptr;        // on omega
  const DriftField* drift_T = nullptr;          // on omega
  const Vec* s_curve = nullptr;                 // tr S per curve vertex
  const CurveDrift* drift_S = nullptr;          // on the curve
  const SpectralResult* steklov = nullptr;
  Tolerances tol;
};

// Closed-case upper bounds: the classical family, the general weighted
// inequality, and the two sharp cases of the first main estimate.
std::vector<BoundReport> evaluate_closed_bounds(const ClosedInputs& in);

// Boundary-case bounds for the first Steklov eigenvalue (both curvature
// sign cases).
std::vector<BoundReport> evaluate_steklov_bounds(const BoundaryInputs& in);

// Boundary-case bound for the first Wentzell eigenvalue at parameter b > 0.
BoundReport evaluate_wentzell_bound(const BoundaryInputs& in, double b,
                                    const SpectralResult& spectrum);

// Supporting identities / pointwise inequalities evaluated on the scenario
// geometry.  For closed scenarios pass ClosedInputs; for boundary scenarios
// pass BoundaryInputs (curve-based checks run on the boundary complex).
std::vector<IdentityReport> evaluate_identities(const ClosedInputs& in);
std::vector<IdentityReport> evaluate_identities(const BoundaryInputs& in);

}  // namespace rv
