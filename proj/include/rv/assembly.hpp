#pragma once

#include <Eigen/SparseCore>
#include <vector>

#include "rv/curvature.hpp"
#include "rv/mesh.hpp"

namespace rv {

using Sparse = Eigen::SparseMatrix<double>;

// All matrices are nv x nv, symmetric, indexed by mesh vertices; boundary
// matrices carry entries only on boundary vertices.  The measure is
// e^{-f} dA (mid-edge quadrature) or e^{-f} ds (two-point Gauss per edge).

// (K)_ij = integral of <T grad phi_i, grad phi_j> over the surface.
Sparse stiffness_matrix(const ImmersedMesh& mesh, const TangentTensorField& T);

// (M)_ij = integral of phi_i phi_j over the surface.
Sparse mass_matrix(const ImmersedMesh& mesh);

// (B)_ij = integral of phi_i phi_j over the boundary curve.
Sparse boundary_mass_matrix(const ImmersedMesh& mesh);

// (Kb)_ij = integral of S phi_i' phi_j' along the boundary curve (S: one
// positive scalar per boundary edge).
Sparse boundary_stiffness_matrix(const ImmersedMesh& mesh, const BoundaryTensorField& S);

// Indices of boundary vertices, ascending.
std::vector<int> boundary_vertex_list(const ImmersedMesh& mesh);

// Bundle of every bilinear form a scenario needs.  Boundary matrices are
// assembled only when the mesh has a boundary (they error on closed meshes).
struct AssembledSystem {
  Sparse stiffness;            // K for L_{T,f}
  Sparse mass;                 // M
  Sparse boundary_mass;        // B, zero rows on interior vertices
  Sparse boundary_stiffness;   // Kb, zero rows on interior vertices
  std::vector<int> boundary_dofs;
};

AssembledSystem assemble_system(const ImmersedMesh& mesh, const TangentTensorField& T,
                                const BoundaryTensorField* S_boundary = nullptr);

// Largest absolute asymmetry |A - A^T|; assembled matrices keep this at 0.
double symmetry_defect(const Sparse& a);

}  // namespace rv
