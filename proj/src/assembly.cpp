#include "rv/assembly.hpp"

#include <cmath>

#include "rv/errors.hpp"

namespace rv {

namespace {

// Two-point Gauss abscissae on [0,1]; exact for cubics.
constexpr double kGaussA = 0.5 - 0.5 / 1.7320508075688772935;
constexpr double kGaussB = 0.5 + 0.5 / 1.7320508075688772935;

Sparse from_triplets(int n, std::vector<Eigen::Triplet<double>>& trips) {
  Sparse a(n, n);
  a.setFromTriplets(trips.begin(), trips.end());
  a.makeCompressed();
  return a;
}

}  // namespace

Sparse stiffness_matrix(const ImmersedMesh& mesh, const TangentTensorField& T) {
  if (T.num_elements() != mesh.num_triangles())
    throw ValidationError("tensor field does not match the mesh element count");
  const int nv = mesh.num_vertices();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(9 * mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const TriangleChart& ch = mesh.charts()[t];
    const Tri& tri = mesh.triangles()[t];
    Mat2 tm;
    tm << T.entries(t, 0), T.entries(t, 1), T.entries(t, 1), T.entries(t, 2);
    // Hat gradients are constant, so the weighted area factors out exactly.
    double w = 0;  // integral of e^{-f} over the triangle (mid-edge rule)
    for (int e = 0; e < 3; ++e) {
      const double fm = 0.5 * (mesh.density()[tri[e]] + mesh.density()[tri[(e + 1) % 3]]);
      w += ch.area / 3.0 * std::exp(-fm);
    }
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const double val = w * ch.grad.col(a).dot(tm * ch.grad.col(b));
        trips.emplace_back(tri[a], tri[b], 0.5 * val);
        trips.emplace_back(tri[b], tri[a], 0.5 * val);
      }
  }
  return from_triplets(nv, trips);
}

Sparse mass_matrix(const ImmersedMesh& mesh) {
  const int nv = mesh.num_vertices();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(9 * mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const TriangleChart& ch = mesh.charts()[t];
    const Tri& tri = mesh.triangles()[t];
    // Mid-edge quadrature: hat functions take value 1/2 at the two midpoints
    // of edges touching their vertex and 0 at the opposite one.
    for (int e = 0; e < 3; ++e) {
      const int i = tri[e], j = tri[(e + 1) % 3];
      const double w =
          ch.area / 3.0 * std::exp(-0.5 * (mesh.density()[i] + mesh.density()[j]));
      trips.emplace_back(i, i, 0.25 * w);
      trips.emplace_back(j, j, 0.25 * w);
      trips.emplace_back(i, j, 0.25 * w);
      trips.emplace_back(j, i, 0.25 * w);
    }
  }
  return from_triplets(nv, trips);
}

Sparse boundary_mass_matrix(const ImmersedMesh& mesh) {
  if (mesh.closed()) throw DomainError("boundary assembly requires a mesh with boundary");
  const int nv = mesh.num_vertices();
  std::vector<Eigen::Triplet<double>> trips;
  for (const Seg& e : mesh.boundary_edges()) {
    const double len = mesh.space().geodesic_distance(mesh.vertices().row(e[0]).transpose(),
                                                      mesh.vertices().row(e[1]).transpose());
    const double fa = mesh.density()[e[0]], fb = mesh.density()[e[1]];
    for (double t : {kGaussA, kGaussB}) {
      const double w = 0.5 * len * std::exp(-((1.0 - t) * fa + t * fb));
      const double pa = 1.0 - t, pb = t;
      trips.emplace_back(e[0], e[0], w * pa * pa);
      trips.emplace_back(e[1], e[1], w * pb * pb);
      trips.emplace_back(e[0], e[1], w * pa * pb);
      trips.emplace_back(e[1], e[0], w * pa * pb);
    }
  }
  return from_triplets(nv, trips);
}

Sparse boundary_stiffness_matrix(const ImmersedMesh& mesh, const BoundaryTensorField& S) {
  if (mesh.closed()) throw DomainError("boundary assembly requires a mesh with boundary");
  const auto& edges = mesh.boundary_edges();
  if (S.value.size() != static_cast<int>(edges.size()))
    throw ValidationError("boundary tensor field does not match the boundary edge count");
  const int nv = mesh.num_vertices();
  std::vector<Eigen::Triplet<double>> trips;
  for (size_t k = 0; k < edges.size(); ++k) {
    const Seg& e = edges[k];
    const double len = mesh.space().geodesic_distance(mesh.vertices().row(e[0]).transpose(),
                                                      mesh.vertices().row(e[1]).transpose());
    const double fa = mesh.density()[e[0]], fb = mesh.density()[e[1]];
    double w = 0;  // integral of e^{-f} along the edge
    for (double t : {kGaussA, kGaussB}) w += 0.5 * len * std::exp(-((1.0 - t) * fa + t * fb));
    const double val = S.value[static_cast<int>(k)] * w / (len * len);
    trips.emplace_back(e[0], e[0], val);
    trips.emplace_back(e[1], e[1], val);
    trips.emplace_back(e[0], e[1], -val);
    trips.emplace_back(e[1], e[0], -val);
  }
  return from_triplets(nv, trips);
}

AssembledSystem assemble_system(const ImmersedMesh& mesh, const TangentTensorField& T,
                                const BoundaryTensorField* S_boundary) {
  AssembledSystem sys;
  sys.stiffness = stiffness_matrix(mesh, T);
  sys.mass = mass_matrix(mesh);
  if (!mesh.closed()) {
    sys.boundary_mass = boundary_mass_matrix(mesh);
    const BoundaryTensorField s =
        S_boundary ? *S_boundary : boundary_identity_field(mesh);
    sys.boundary_stiffness = boundary_stiffness_matrix(mesh, s);
    sys.boundary_dofs = boundary_vertex_list(mesh);
  } else {
    sys.boundary_mass.resize(mesh.num_vertices(), mesh.num_vertices());
    sys.boundary_stiffness.resize(mesh.num_vertices(), mesh.num_vertices());
  }
  return sys;
}

std::vector<int> boundary_vertex_list(const ImmersedMesh& mesh) {
  std::vector<int> out;
  for (int v = 0; v < mesh.num_vertices(); ++v)
    if (mesh.is_boundary_vertex(v)) out.push_back(v);
  return out;
}

double symmetry_defect(const Sparse& a) {
  Sparse d = Sparse(a.transpose()) - a;
  double worst = 0;
  for (int k = 0; k < d.outerSize(); ++k)
    for (Sparse::InnerIterator it(d, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

}  // namespace rv
