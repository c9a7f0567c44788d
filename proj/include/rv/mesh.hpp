#pragma once

#include <array>
#include <string>
#include <vector>

#include "rv/space_form.hpp"

namespace rv {

using Tri = std::array<int, 3>;
using Seg = std::array<int, 2>;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// Flat chart of one triangle, determined by its geodesic edge lengths via
// the planar law-of-cosines layout: corner 0 at the origin, corner 1 on the
// positive x-axis.  This is the piecewise-flat metric every quadrature and
// stiffness integral uses.
struct TriangleChart {
  double l01 = 0, l02 = 0, l12 = 0;
  Vec2 p0, p1, p2;
  double area = 0;
  Eigen::Matrix<double, 2, 3> grad;  // gradients of the three hat functions
  Mat frame;  // rep_dim x 2: ambient tangent frame (orthonormal in the model form)
};

// Weighted areas/lengths of a mesh under the measure e^{-f} dA.
struct WeightedMeasures {
  Vec element_weight;         // per triangle (surfaces) or segment (curves)
  Vec boundary_edge_weight;   // per boundary edge (surfaces with boundary)
  double volume = 0;          // integral of e^{-f} over the mesh
  double boundary_volume = 0; // same over the boundary complex
  Vec lumped_vertex;          // integral of each hat function against e^{-f}
  Vec lumped_boundary;        // boundary version, full-size, zero off-boundary
};

// Triangulated surface (or polygonal curve) immersed in a model space,
// carrying a per-vertex log-density f for the measure e^{-f} dA.
// Construction validates indices, the model-point constraint, manifoldness,
// orientation consistency, connectivity, and non-degeneracy, and caches the
// per-element charts plus adjacency tables.
class ImmersedMesh {
 public:
  static ImmersedMesh surface(SpaceForm space, Mat vertices,
                              std::vector<Tri> triangles, Vec density);
  static ImmersedMesh curve(SpaceForm space, Mat vertices,
                            std::vector<Seg> segments, Vec density);

  const SpaceForm& space() const { return space_; }
  int intrinsic_dim() const { return intrinsic_dim_; }
  int num_vertices() const { return static_cast<int>(vertices_.rows()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_segments() const { return static_cast<int>(segments_.size()); }

  const Mat& vertices() const { return vertices_; }
  Vec vertex(int i) const { return vertices_.row(i).transpose(); }
  const Vec& density() const { return density_; }
  const std::vector<Tri>& triangles() const { return triangles_; }
  const std::vector<Seg>& segments() const { return segments_; }

  bool closed() const { return boundary_edges_.empty(); }
  const std::vector<Seg>& boundary_edges() const { return boundary_edges_; }
  const std::vector<int>& boundary_vertices() const { return boundary_vertices_; }
  bool is_boundary_vertex(int v) const { return boundary_mask_[v]; }

  const std::vector<TriangleChart>& charts() const { return charts_; }
  const Vec& segment_lengths() const { return segment_lengths_; }
  double mean_edge_length() const { return mean_edge_length_; }

  const std::vector<std::vector<int>>& vertex_triangles() const { return vertex_tris_; }
  const std::vector<std::vector<int>>& vertex_neighbors() const { return vertex_nbrs_; }

  // Set when this mesh was extracted as the boundary of a surface:
  // parent_vertex()[i] is the index in the parent mesh.
  const std::vector<int>& parent_vertex() const { return parent_vertex_; }

  // Number of connected components of a curve mesh (boundary loops).
  int loop_count() const { return loop_count_; }

  const std::vector<std::string>& warnings() const { return warnings_; }

  // Used by boundary_complex to transfer provenance.
  void set_parent_vertex(std::vector<int> pv) { parent_vertex_ = std::move(pv); }

 private:
  ImmersedMesh(SpaceForm space) : space_(space) {}
  void validate_and_build_surface();
  void validate_and_build_curve();

  SpaceForm space_;
  int intrinsic_dim_ = 2;
  Mat vertices_;
  Vec density_;
  std::vector<Tri> triangles_;
  std::vector<Seg> segments_;

  std::vector<Seg> boundary_edges_;
  std::vector<int> boundary_vertices_;
  std::vector<char> boundary_mask_;
  std::vector<TriangleChart> charts_;
  Vec segment_lengths_;
  double mean_edge_length_ = 0;
  std::vector<std::vector<int>> vertex_tris_;
  std::vector<std::vector<int>> vertex_nbrs_;
  std::vector<int> parent_vertex_;
  int loop_count_ = 0;
  std::vector<std::string> warnings_;
};

// First fundamental form of triangle t in its chart basis (edge vectors of
// the law-of-cosines layout).  det = 4 * area^2.
Mat2 induced_metric(const ImmersedMesh& mesh, int t);

WeightedMeasures weighted_measures(const ImmersedMesh& mesh);

// Extracts the boundary loops as an oriented curve mesh with inherited
// density; vertices are compacted and parent_vertex() records the mapping.
ImmersedMesh boundary_complex(const ImmersedMesh& mesh);

// Quadrature of a per-vertex scalar against e^{-f}: mid-edge rule on
// surfaces (exact for quadratics per flat triangle), two-point Gauss on
// curves.  g is interpolated linearly.
double integrate_scalar(const ImmersedMesh& mesh, const Vec& g);

// Same over the boundary edges of a surface; g indexed by parent vertices.
double integrate_boundary_scalar(const ImmersedMesh& mesh, const Vec& g);

// WMESH plain-text round-trip (surfaces only).  Line-oriented format:
//   line 1: WMESH <model> <delta>    model in {EUCLIDEAN, SPHERE, HYPERBOLIC}
//   line 2: <num_vertices> <num_triangles> <coord_count>
//   then one line per vertex: coord_count representation-space coordinates
//   followed by the density value f, then one line per triangle with three
//   0-based vertex indices (counterclockwise w.r.t. the outward orientation).
// '#' starts a comment; blank lines are ignored; UTF-8 with LF endings.
ImmersedMesh parse_mesh(const std::string& text);
std::string write_mesh(const ImmersedMesh& mesh);

}  // namespace rv
