#pragma once

#include <string>
#include <vector>

#include "rv/assembly.hpp"
#include "rv/mesh.hpp"

namespace rv {

// Result of one eigenvalue solve.  eigenvector_1 always spans all mesh
// vertices (boundary problems are extended harmonically to the interior).
struct SpectralResult {
  std::string problem_kind;            // closed | steklov | wentzell
  double eigenvalue_1 = 0;             // lambda_1 | sigma_1 | alpha_1
  Vec eigenvector_1;
  std::vector<double> next_eigenvalues;  // ascending, after eigenvalue_1
  double residual = 0;                 // ||Ax - lambda Bx|| / (||Ax|| + |lambda| ||Bx||)
  double deflation_report = 0;         // |1^T B x| / ||x||_B
};

struct EigenOptions {
  int extra = 5;             // how many further eigenvalues to report
  double tol = 1e-10;        // iteration tolerance
  int max_iterations = 5000;
  // Direct dense solve below this many DOFs, shift-invert iteration above.
  // Keep <= 3000: the dense path is quadratic in memory and cubic in time.
  int dense_threshold = 1200;
};

// Smallest nonzero eigenvalue of K u = lambda M u on a closed mesh, with the
// constant mode deflated.
SpectralResult solve_closed(const ImmersedMesh& mesh, const AssembledSystem& sys,
                            const EigenOptions& opts = {});

// Smallest positive Steklov eigenvalue via exact interior condensation:
// S_dtn y = sigma B y on boundary DOFs, S_dtn the Schur complement of K.
SpectralResult solve_steklov(const ImmersedMesh& mesh, const AssembledSystem& sys,
                             const EigenOptions& opts = {});

// Same eigenvalue from the uncondensed pencil K u = sigma B u (B singular),
// handled by the spectral transformation B u = tau (K + B) u.
SpectralResult solve_steklov_full(const ImmersedMesh& mesh, const AssembledSystem& sys,
                                  const EigenOptions& opts = {});

// Smallest positive eigenvalue of (S_dtn + b Kb) y = alpha B y; b >= 0
// (b = 0 degenerates to the Steklov problem).
SpectralResult solve_wentzell(const ImmersedMesh& mesh, const AssembledSystem& sys, double b,
                              const EigenOptions& opts = {});

// Dense Dirichlet-to-Neumann block and the interior extension operator
// (u_interior = -extension * y); exposed for bound evaluation and tests.
struct CondensedBoundary {
  std::vector<int> boundary;   // boundary vertex ids, ascending
  std::vector<int> interior;   // interior vertex ids, ascending
  Mat schur;                   // nb x nb Dirichlet-to-Neumann form
  Mat extension;               // ni x nb harmonic extension coefficients
  Mat boundary_mass;           // nb x nb
  Mat boundary_stiffness;      // nb x nb
};

CondensedBoundary condense_boundary(const ImmersedMesh& mesh, const AssembledSystem& sys);

}  // namespace rv
