#include "rv/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

namespace rv {

namespace {

int64_t edge_key(int a, int b, int n) {
  const int lo = std::min(a, b), hi = std::max(a, b);
  return static_cast<int64_t>(lo) * n + hi;
}

// Two-point Gauss nodes on [0,1]; exact for cubics, used for edge integrals.
constexpr double kGaussA = 0.5 - 0.28867513459481287;  // (1 - 1/sqrt(3))/2
constexpr double kGaussB = 0.5 + 0.28867513459481287;

struct LinkUnionFind {
  std::map<int, int> parent;
  int find(int x) {
    auto it = parent.find(x);
    if (it == parent.end()) {
      parent[x] = x;
      return x;
    }
    while (it->second != x) {
      x = it->second;
      it = parent.find(x);
    }
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
  int components() {
    int c = 0;
    for (auto& [k, v] : parent)
      if (find(k) == k) ++c;
    return c;
  }
};

}  // namespace

ImmersedMesh ImmersedMesh::surface(SpaceForm space, Mat vertices,
                                   std::vector<Tri> triangles, Vec density) {
  ImmersedMesh m(space);
  m.intrinsic_dim_ = 2;
  m.vertices_ = std::move(vertices);
  m.triangles_ = std::move(triangles);
  m.density_ = std::move(density);
  m.validate_and_build_surface();
  return m;
}

ImmersedMesh ImmersedMesh::curve(SpaceForm space, Mat vertices,
                                 std::vector<Seg> segments, Vec density) {
  ImmersedMesh m(space);
  m.intrinsic_dim_ = 1;
  m.vertices_ = std::move(vertices);
  m.segments_ = std::move(segments);
  m.density_ = std::move(density);
  m.validate_and_build_curve();
  return m;
}

void ImmersedMesh::validate_and_build_surface() {
  const int n = num_vertices();
  const int nt = num_triangles();
  if (n == 0) throw ValidationError("mesh has no vertices");
  if (nt == 0) throw ValidationError("surface mesh has no triangles");
  if (vertices_.cols() != space_.rep_dim()) {
    throw ValidationError("vertex coordinate count does not match the model space");
  }
  if (density_.size() == 0) density_ = Vec::Zero(n);
  if (density_.size() != n) throw ValidationError("density size does not match vertex count");
  if (!vertices_.allFinite() || !density_.allFinite()) {
    throw ValidationError("non-finite vertex coordinate or density value");
  }
  for (int i = 0; i < n; ++i) {
    if (!space_.is_valid_point(vertices_.row(i).transpose(), 1e-10)) {
      throw ValidationError("vertex " + std::to_string(i) +
                            " violates the model-space constraint");
    }
  }

  // --- connectivity tables and manifold checks -------------------------
  vertex_tris_.assign(n, {});
  struct EdgeUse {
    int tris[2] = {-1, -1};
    bool forward[2] = {false, false};
    int count = 0;
    int a = -1, b = -1;  // directed as first seen
  };
  std::map<int64_t, EdgeUse> edges;
  for (int t = 0; t < nt; ++t) {
    const Tri& tri = triangles_[t];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k], b = tri[(k + 1) % 3];
      if (a < 0 || a >= n || b < 0 || b >= n) {
        throw ValidationError("triangle " + std::to_string(t) + " has an index out of range");
      }
      if (a == b) throw ValidationError("triangle " + std::to_string(t) + " repeats a vertex");
      EdgeUse& e = edges[edge_key(a, b, n)];
      if (e.count == 0) {
        e.a = a;
        e.b = b;
      }
      if (e.count >= 2) {
        throw ValidationError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                              ") belongs to more than two triangles");
      }
      e.tris[e.count] = t;
      e.forward[e.count] = (a == e.a);
      ++e.count;
    }
    for (int k = 0; k < 3; ++k) vertex_tris_[tri[k]].push_back(t);
  }
  for (int v = 0; v < n; ++v) {
    if (vertex_tris_[v].empty()) {
      throw ValidationError("vertex " + std::to_string(v) + " is not used by any triangle");
    }
  }
  for (auto& [key, e] : edges) {
    if (e.count == 2 && e.forward[0] == e.forward[1]) {
      throw ValidationError("inconsistent orientation across edge (" + std::to_string(e.a) +
                            "," + std::to_string(e.b) + ")");
    }
  }

  // Global connectivity over the triangle adjacency graph.
  {
    std::vector<char> seen(nt, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int reached = 1;
    std::map<int64_t, std::vector<int>> by_edge;
    for (auto& [key, e] : edges) {
      for (int k = 0; k < e.count; ++k) by_edge[key].push_back(e.tris[k]);
    }
    while (!q.empty()) {
      const int t = q.front();
      q.pop();
      const Tri& tri = triangles_[t];
      for (int k = 0; k < 3; ++k) {
        for (int other : by_edge[edge_key(tri[k], tri[(k + 1) % 3], n)]) {
          if (!seen[other]) {
            seen[other] = 1;
            ++reached;
            q.push(other);
          }
        }
      }
    }
    if (reached != nt) throw ValidationError("mesh is not connected");
  }

  // Vertex links must be single umbrellas (no pinched vertices).
  for (int v = 0; v < n; ++v) {
    LinkUnionFind uf;
    for (int t : vertex_tris_[v]) {
      const Tri& tri = triangles_[t];
      int a = -1, b = -1;
      for (int k = 0; k < 3; ++k) {
        if (tri[k] == v) {
          a = tri[(k + 1) % 3];
          b = tri[(k + 2) % 3];
        }
      }
      uf.find(a);
      uf.find(b);
      uf.unite(a, b);
    }
    if (uf.components() != 1) {
      throw ValidationError("vertex " + std::to_string(v) + " has a pinched neighborhood");
    }
  }

  // Boundary edges, oriented as induced by their unique triangle.
  boundary_mask_.assign(n, 0);
  for (auto& [key, e] : edges) {
    if (e.count == 1) {
      boundary_edges_.push_back({e.a, e.b});
      boundary_mask_[e.a] = 1;
      boundary_mask_[e.b] = 1;
    }
  }
  std::sort(boundary_edges_.begin(), boundary_edges_.end());
  for (int v = 0; v < n; ++v) {
    if (boundary_mask_[v]) boundary_vertices_.push_back(v);
  }

  // One-ring vertex adjacency (sorted, deterministic).
  vertex_nbrs_.assign(n, {});
  for (auto& [key, e] : edges) {
    vertex_nbrs_[e.a].push_back(e.b);
    vertex_nbrs_[e.b].push_back(e.a);
  }
  for (auto& nb : vertex_nbrs_) std::sort(nb.begin(), nb.end());

  // --- geometric charts -------------------------------------------------
  charts_.resize(nt);
  double edge_sum = 0;
  for (auto& [key, e] : edges) {
    edge_sum += space_.geodesic_distance(vertex(e.a), vertex(e.b));
  }
  mean_edge_length_ = edge_sum / static_cast<double>(edges.size());

  double area_sum = 0;
  for (int t = 0; t < nt; ++t) {
    TriangleChart& ch = charts_[t];
    const Tri& tri = triangles_[t];
    const Vec x0 = vertex(tri[0]), x1 = vertex(tri[1]), x2 = vertex(tri[2]);
    ch.l01 = space_.geodesic_distance(x0, x1);
    ch.l02 = space_.geodesic_distance(x0, x2);
    ch.l12 = space_.geodesic_distance(x1, x2);
    ch.p0 = Vec2(0, 0);
    ch.p1 = Vec2(ch.l01, 0);
    const double px = ch.l01 > 0 ? (ch.l01 * ch.l01 + ch.l02 * ch.l02 - ch.l12 * ch.l12) /
                                       (2.0 * ch.l01)
                                 : 0.0;
    const double py2 = ch.l02 * ch.l02 - px * px;
    ch.p2 = Vec2(px, py2 > 0 ? std::sqrt(py2) : 0.0);
    ch.area = 0.5 * ch.l01 * ch.p2.y();
    area_sum += ch.area;
  }
  const double mean_area = area_sum / nt;
  for (int t = 0; t < nt; ++t) {
    if (!(charts_[t].area > 1e-12 * mean_area)) {
      throw ValidationError("triangle " + std::to_string(t) + " is degenerate (area " +
                            std::to_string(charts_[t].area) + ")");
    }
    if (charts_[t].area < 1e-6 * mean_area) {
      warnings_.push_back("triangle " + std::to_string(t) + " is a sliver (area ratio " +
                          std::to_string(charts_[t].area / mean_area) + ")");
    }
  }
  for (int t = 0; t < nt; ++t) {
    TriangleChart& ch = charts_[t];
    // Hat-function gradients from the inverse chart Jacobian.
    Mat2 J;
    J.col(0) = ch.p1 - ch.p0;
    J.col(1) = ch.p2 - ch.p0;
    const Mat2 Jit = J.inverse().transpose();
    ch.grad.col(1) = Jit.col(0);
    ch.grad.col(2) = Jit.col(1);
    ch.grad.col(0) = -Jit.col(0) - Jit.col(1);
    // Ambient frame aligned with the chart axes at corner 0.
    const Tri& tri = triangles_[t];
    const Vec x0 = vertex(tri[0]);
    Vec u1 = space_.log_map(x0, vertex(tri[1]));
    Vec u2 = space_.log_map(x0, vertex(tri[2]));
    Vec e1 = u1 / space_.norm(u1);
    Vec e2 = u2 - space_.dot(u2, e1) * e1;
    const double n2 = space_.norm(e2);
    if (n2 < 1e-14) throw ValidationError("triangle " + std::to_string(t) + " has collinear log directions");
    e2 /= n2;
    ch.frame.resize(space_.rep_dim(), 2);
    ch.frame.col(0) = e1;
    ch.frame.col(1) = e2;
  }
}

void ImmersedMesh::validate_and_build_curve() {
  const int n = num_vertices();
  const int ns = num_segments();
  if (n == 0) throw ValidationError("mesh has no vertices");
  if (ns == 0) throw ValidationError("curve mesh has no segments");
  if (vertices_.cols() != space_.rep_dim()) {
    throw ValidationError("vertex coordinate count does not match the model space");
  }
  if (density_.size() == 0) density_ = Vec::Zero(n);
  if (density_.size() != n) throw ValidationError("density size does not match vertex count");
  if (!vertices_.allFinite() || !density_.allFinite()) {
    throw ValidationError("non-finite vertex coordinate or density value");
  }
  for (int i = 0; i < n; ++i) {
    if (!space_.is_valid_point(vertices_.row(i).transpose(), 1e-10)) {
      throw ValidationError("vertex " + std::to_string(i) +
                            " violates the model-space constraint");
    }
  }
  std::vector<int> out_deg(n, 0), in_deg(n, 0);
  vertex_nbrs_.assign(n, {});
  for (int s = 0; s < ns; ++s) {
    const auto [a, b] = segments_[s];
    if (a < 0 || a >= n || b < 0 || b >= n) {
      throw ValidationError("segment " + std::to_string(s) + " has an index out of range");
    }
    if (a == b) throw ValidationError("segment " + std::to_string(s) + " repeats a vertex");
    if (++out_deg[a] > 1 || ++in_deg[b] > 1) {
      throw ValidationError("curve is not a disjoint union of simple oriented paths/loops");
    }
    vertex_nbrs_[a].push_back(b);
    vertex_nbrs_[b].push_back(a);
  }
  for (int v = 0; v < n; ++v) {
    if (vertex_nbrs_[v].empty()) {
      throw ValidationError("vertex " + std::to_string(v) + " is not used by any segment");
    }
    std::sort(vertex_nbrs_[v].begin(), vertex_nbrs_[v].end());
  }
  // Count connected components.
  {
    std::vector<char> seen(n, 0);
    loop_count_ = 0;
    for (int v0 = 0; v0 < n; ++v0) {
      if (seen[v0]) continue;
      ++loop_count_;
      std::queue<int> q;
      q.push(v0);
      seen[v0] = 1;
      while (!q.empty()) {
        const int v = q.front();
        q.pop();
        for (int w : vertex_nbrs_[v]) {
          if (!seen[w]) {
            seen[w] = 1;
            q.push(w);
          }
        }
      }
    }
  }
  segment_lengths_.resize(ns);
  double sum = 0;
  for (int s = 0; s < ns; ++s) {
    const double L = space_.geodesic_distance(vertex(segments_[s][0]), vertex(segments_[s][1]));
    segment_lengths_[s] = L;
    sum += L;
  }
  mean_edge_length_ = sum / ns;
  const double mean_len = mean_edge_length_;
  for (int s = 0; s < ns; ++s) {
    if (!(segment_lengths_[s] > 1e-12 * mean_len)) {
      throw ValidationError("segment " + std::to_string(s) + " is degenerate");
    }
  }
  boundary_mask_.assign(n, 0);
}

Mat2 induced_metric(const ImmersedMesh& mesh, int t) {
  if (mesh.intrinsic_dim() != 2) throw DomainError("induced_metric: surface meshes only");
  if (t < 0 || t >= mesh.num_triangles()) throw DomainError("induced_metric: bad triangle index");
  const TriangleChart& ch = mesh.charts()[t];
  Mat2 J;
  J.col(0) = ch.p1 - ch.p0;
  J.col(1) = ch.p2 - ch.p0;
  return J.transpose() * J;
}

WeightedMeasures weighted_measures(const ImmersedMesh& mesh) {
  WeightedMeasures wm;
  const int n = mesh.num_vertices();
  const Vec& f = mesh.density();
  wm.lumped_vertex = Vec::Zero(n);
  wm.lumped_boundary = Vec::Zero(n);
  if (mesh.intrinsic_dim() == 2) {
    const int nt = mesh.num_triangles();
    wm.element_weight.resize(nt);
    for (int t = 0; t < nt; ++t) {
      const Tri& tri = mesh.triangles()[t];
      const double A = mesh.charts()[t].area;
      double q = 0;
      for (int k = 0; k < 3; ++k) {
        const int a = tri[k], b = tri[(k + 1) % 3];
        const double w = std::exp(-0.5 * (f[a] + f[b]));  // e^{-f} at the edge midpoint
        q += w;
        wm.lumped_vertex[a] += (A / 6.0) * w;
        wm.lumped_vertex[b] += (A / 6.0) * w;
      }
      wm.element_weight[t] = (A / 3.0) * q;
      wm.volume += wm.element_weight[t];
    }
    const auto& bedges = mesh.boundary_edges();
    wm.boundary_edge_weight.resize(static_cast<Eigen::Index>(bedges.size()));
    for (size_t e = 0; e < bedges.size(); ++e) {
      const auto [a, b] = bedges[e];
      const double L = mesh.space().geodesic_distance(mesh.vertex(a), mesh.vertex(b));
      const double fa = f[a], fb = f[b];
      const double wA = std::exp(-(fa + kGaussA * (fb - fa)));
      const double wB = std::exp(-(fa + kGaussB * (fb - fa)));
      wm.boundary_edge_weight[static_cast<Eigen::Index>(e)] = 0.5 * L * (wA + wB);
      wm.boundary_volume += 0.5 * L * (wA + wB);
      wm.lumped_boundary[a] += 0.5 * L * ((1 - kGaussA) * wA + (1 - kGaussB) * wB);
      wm.lumped_boundary[b] += 0.5 * L * (kGaussA * wA + kGaussB * wB);
    }
  } else {
    const int ns = mesh.num_segments();
    wm.element_weight.resize(ns);
    for (int s = 0; s < ns; ++s) {
      const auto [a, b] = mesh.segments()[s];
      const double L = mesh.segment_lengths()[s];
      const double fa = f[a], fb = f[b];
      const double wA = std::exp(-(fa + kGaussA * (fb - fa)));
      const double wB = std::exp(-(fa + kGaussB * (fb - fa)));
      wm.element_weight[s] = 0.5 * L * (wA + wB);
      wm.volume += wm.element_weight[s];
      wm.lumped_vertex[a] += 0.5 * L * ((1 - kGaussA) * wA + (1 - kGaussB) * wB);
      wm.lumped_vertex[b] += 0.5 * L * (kGaussA * wA + kGaussB * wB);
    }
  }
  return wm;
}

ImmersedMesh boundary_complex(const ImmersedMesh& mesh) {
  if (mesh.intrinsic_dim() != 2) throw DomainError("boundary_complex: surface meshes only");
  if (mesh.closed()) throw DomainError("boundary_complex: mesh has empty boundary");
  const auto& bedges = mesh.boundary_edges();
  std::vector<int> used;
  for (int v : mesh.boundary_vertices()) used.push_back(v);
  std::vector<int> to_local(mesh.num_vertices(), -1);
  for (size_t i = 0; i < used.size(); ++i) to_local[used[i]] = static_cast<int>(i);
  Mat verts(static_cast<Eigen::Index>(used.size()), mesh.space().rep_dim());
  Vec dens(static_cast<Eigen::Index>(used.size()));
  for (size_t i = 0; i < used.size(); ++i) {
    verts.row(static_cast<Eigen::Index>(i)) = mesh.vertices().row(used[i]);
    dens[static_cast<Eigen::Index>(i)] = mesh.density()[used[i]];
  }
  std::vector<Seg> segs;
  segs.reserve(bedges.size());
  for (const auto& [a, b] : bedges) segs.push_back({to_local[a], to_local[b]});
  ImmersedMesh out = ImmersedMesh::curve(mesh.space(), std::move(verts), std::move(segs),
                                         std::move(dens));
  out.set_parent_vertex(used);
  return out;
}

double integrate_scalar(const ImmersedMesh& mesh, const Vec& g) {
  if (g.size() != mesh.num_vertices()) throw DomainError("integrate_scalar: size mismatch");
  const Vec& f = mesh.density();
  double total = 0;
  if (mesh.intrinsic_dim() == 2) {
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      const Tri& tri = mesh.triangles()[t];
      const double A = mesh.charts()[t].area;
      for (int k = 0; k < 3; ++k) {
        const int a = tri[k], b = tri[(k + 1) % 3];
        total += (A / 3.0) * 0.5 * (g[a] + g[b]) * std::exp(-0.5 * (f[a] + f[b]));
      }
    }
  } else {
    for (int s = 0; s < mesh.num_segments(); ++s) {
      const auto [a, b] = mesh.segments()[s];
      const double L = mesh.segment_lengths()[s];
      for (double t : {kGaussA, kGaussB}) {
        total += 0.5 * L * (g[a] + t * (g[b] - g[a])) *
                 std::exp(-(f[a] + t * (f[b] - f[a])));
      }
    }
  }
  return total;
}

double integrate_boundary_scalar(const ImmersedMesh& mesh, const Vec& g) {
  if (mesh.intrinsic_dim() != 2) throw DomainError("integrate_boundary_scalar: surface meshes only");
  if (g.size() != mesh.num_vertices()) throw DomainError("integrate_boundary_scalar: size mismatch");
  const Vec& f = mesh.density();
  double total = 0;
  for (const auto& [a, b] : mesh.boundary_edges()) {
    const double L = mesh.space().geodesic_distance(mesh.vertex(a), mesh.vertex(b));
    for (double t : {kGaussA, kGaussB}) {
      total += 0.5 * L * (g[a] + t * (g[b] - g[a])) * std::exp(-(f[a] + t * (f[b] - f[a])));
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// WMESH text round-trip

namespace {

std::vector<std::vector<std::string>> tokenize(const std::string& text,
                                               std::vector<int>& line_no) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string tok;
    while (ls >> tok) toks.push_back(tok);
    if (!toks.empty()) {
      rows.push_back(std::move(toks));
      line_no.push_back(ln);
    }
  }
  return rows;
}

double to_double(const std::string& s, int line) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected a number, got '" + s + "'", line);
  }
}

int to_int(const std::string& s, int line) {
  try {
    size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw ParseError("expected an integer, got '" + s + "'", line);
  }
}

}  // namespace

ImmersedMesh parse_mesh(const std::string& text) {
  std::vector<int> lines;
  const auto rows = tokenize(text, lines);
  size_t i = 0;
  auto need = [&](size_t k) -> const std::vector<std::string>& {
    if (k >= rows.size()) throw ParseError("unexpected end of mesh text");
    return rows[k];
  };
  const auto& header = need(i);
  if (header.size() != 3 || header[0] != "WMESH") {
    throw ParseError("malformed header: expected 'WMESH <model> <delta>'",
                     lines.empty() ? 1 : lines[i]);
  }
  const std::string& model = header[1];
  const double delta = to_double(header[2], lines[i]);
  if (model == "EUCLIDEAN") {
    if (delta != 0.0) throw ParseError("model EUCLIDEAN requires delta = 0", lines[i]);
  } else if (model == "SPHERE") {
    if (delta <= 0.0) throw ParseError("model SPHERE requires delta > 0", lines[i]);
  } else if (model == "HYPERBOLIC") {
    if (delta >= 0.0) throw ParseError("model HYPERBOLIC requires delta < 0", lines[i]);
  } else {
    throw ParseError("unknown model '" + model +
                         "' (expected EUCLIDEAN, SPHERE, or HYPERBOLIC)",
                     lines[i]);
  }
  ++i;
  const auto& counts = need(i);
  if (counts.size() != 3) {
    throw ParseError("expected '<num_vertices> <num_triangles> <coord_count>'", lines[i]);
  }
  const int n = to_int(counts[0], lines[i]);
  const int m = to_int(counts[1], lines[i]);
  const int rep = to_int(counts[2], lines[i]);
  if (n <= 0 || m <= 0) {
    throw ParseError("vertex and triangle counts must be positive", lines[i]);
  }
  // Curved models are represented one dimension up from the manifold.
  const int dim = model == "EUCLIDEAN" ? rep : rep - 1;
  if (dim < 2) throw ParseError("coordinate count too small for the model", lines[i]);
  SpaceForm space(delta, dim);
  ++i;
  Mat verts(n, rep);
  Vec dens(n);
  for (int v = 0; v < n; ++v, ++i) {
    const auto& row = need(i);
    if (static_cast<int>(row.size()) != rep + 1) {
      throw ParseError("expected " + std::to_string(rep) +
                           " coordinates followed by a density value",
                       lines[i]);
    }
    for (int k = 0; k < rep; ++k) verts(v, k) = to_double(row[k], lines[i]);
    dens[v] = to_double(row[rep], lines[i]);
  }
  std::vector<Tri> tris;
  tris.reserve(m);
  for (int e = 0; e < m; ++e, ++i) {
    const auto& row = need(i);
    if (row.size() != 3) throw ParseError("expected three vertex indices", lines[i]);
    tris.push_back({to_int(row[0], lines[i]), to_int(row[1], lines[i]),
                    to_int(row[2], lines[i])});
  }
  if (i < rows.size()) throw ParseError("unexpected content after the last triangle", lines[i]);
  return ImmersedMesh::surface(space, std::move(verts), std::move(tris), std::move(dens));
}

std::string write_mesh(const ImmersedMesh& mesh) {
  if (mesh.intrinsic_dim() != 2) {
    throw DomainError("the mesh file format stores triangulated surfaces only");
  }
  const double delta = mesh.space().delta();
  const char* model = delta == 0.0 ? "EUCLIDEAN" : (delta > 0.0 ? "SPHERE" : "HYPERBOLIC");
  std::ostringstream out;
  out.precision(17);
  out << "WMESH " << model << " " << delta << "\n";
  out << mesh.num_vertices() << " " << mesh.num_triangles() << " "
      << mesh.space().rep_dim() << "\n";
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    for (int k = 0; k < mesh.space().rep_dim(); ++k) out << mesh.vertices()(v, k) << " ";
    out << mesh.density()[v] << "\n";
  }
  for (const Tri& t : mesh.triangles()) out << t[0] << " " << t[1] << " " << t[2] << "\n";
  return out.str();
}

}  // namespace rv
