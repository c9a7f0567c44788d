#pragma once

#include <string>
#include <vector>

#include "rv/mesh.hpp"

namespace rv {

// Symmetric 2x2 tensor per triangle in that triangle's chart frame,
// stored as rows (a11, a12, a22).
struct TangentTensorField {
  Mat entries;  // nt x 3
  std::string label = "identity";
  bool divergence_free = true;  // asserted analytically for builtin fields
  int num_elements() const { return static_cast<int>(entries.rows()); }
};

TangentTensorField identity_field(const ImmersedMesh& mesh, double scale = 1.0);

// Scalar weight per boundary edge: the positive 1x1 tensors of the boundary
// curve of a surface.
struct BoundaryTensorField {
  Vec value;  // one entry per boundary edge, ordered as mesh.boundary_edges()
  std::string label = "identity";
};

BoundaryTensorField boundary_identity_field(const ImmersedMesh& mesh, double scale = 1.0);

// Smallest eigenvalue over all elements; positive definiteness gauge.
double min_tensor_eigenvalue(const TangentTensorField& T);

// Second-order data of the immersion at every vertex, obtained from
// weighted least-squares jet fits over (at least) two-ring neighborhoods
// expressed in geodesic normal coordinates of the model at the vertex.
struct CurvatureField {
  std::vector<Mat> frame;   // per vertex: rep_dim x 2 tangent frame (model-orthonormal)
  Mat b11, b12, b22;        // nv x rep_dim: normal-valued second fundamental form
  Mat mean_vector;          // nv x rep_dim: (b11 + b22) / 2
  bool hypersurface = false;  // model codimension one
  Mat unit_normal;          // nv x rep_dim, outward; hypersurfaces only
  Mat shape_operator;       // nv x 3 (a11,a12,a22), inward-positive; hypersurfaces only
  Vec kappa1, kappa2;       // principal curvatures, kappa1 >= kappa2
  Vec h1, h2;               // mean and Gauss symmetric means: h1=(k1+k2)/2, h2=k1*k2
};

CurvatureField second_fundamental_form(const ImmersedMesh& mesh);

// Newton tensor of the shape operator: r=0 gives the identity, r=1 gives
// tr(A) I - A averaged onto triangles.  Positivity is NOT guaranteed.
TangentTensorField newton_tensor(const ImmersedMesh& mesh, const CurvatureField& field, int r);

// Transfers a per-triangle tensor onto vertices through the closest
// rotation between frames; rows (a11,a12,a22) in each vertex frame.
Mat vertex_tensor(const ImmersedMesh& mesh, const CurvatureField& field,
                  const TangentTensorField& T);

// H_T(v) = sum_ij T_ij B_ij in the shared vertex frame (normal-valued).
Mat generalized_mean_curvature(const ImmersedMesh& mesh, const CurvatureField& field,
                               const TangentTensorField& T);

// Everything the bounds need about H_T - T(grad f): the vectors, norms, and
// per-vertex traces.  grad f is the intrinsic gradient of the P1 density,
// area-averaged onto vertices and expressed in the vertex tangent frame.
struct DriftField {
  Mat h_t;         // nv x rep_dim
  Mat t_grad_f;    // nv x rep_dim (tangential part)
  Mat drift;       // h_t - t_grad_f
  Vec norm;        // ||drift|| per vertex
  Vec trace;       // tr(T) per vertex
  Vec grad_f_norm; // ||grad f|| per vertex (diagnostics)
};

DriftField drift_term(const ImmersedMesh& mesh, const CurvatureField& field,
                      const TangentTensorField& T);

// Geodesic-curvature vector of a curve mesh at each vertex (ambient
// representation coordinates), by the unequally-spaced second difference of
// log-mapped neighbors; exact on equally spaced circles in flat models.
Mat curve_curvature(const ImmersedMesh& curve);

// Scalar S-weights per vertex of a curve mesh from per-edge values of the
// parent surface's boundary field (mean of the adjacent edges).
Vec boundary_vertex_scalars(const ImmersedMesh& surface, const BoundaryTensorField& S);

// Drift data of a closed curve with scalar weight s: H_s = s * kappa (the
// curvature vector scaled by the weight), minus the weighted tangential
// density gradient s * f' * tangent.
struct CurveDrift {
  Mat h_s;      // nv x rep_dim
  Mat drift;    // h_s - s * grad f
  Vec norm;     // ||drift|| per vertex
  Vec trace;    // the scalar weight itself
};

CurveDrift curve_drift_term(const ImmersedMesh& curve, const Vec& s_at_vertices);

}  // namespace rv
