#include "rv/shapes.hpp"

#include <cmath>
#include <map>
#include <random>

namespace rv {

namespace {

struct TriData {
  Mat V;
  std::vector<Tri> F;
};

// Portable uniform in [-1, 1): uses the top 53 bits of the generator only.
double sym_rand(std::mt19937_64& rng) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

TriData icosahedron() {
  const double t = 0.5 * (1.0 + std::sqrt(5.0));
  TriData d;
  d.V.resize(12, 3);
  d.V << -1, t, 0, 1, t, 0, -1, -t, 0, 1, -t, 0,
         0, -1, t, 0, 1, t, 0, -1, -t, 0, 1, -t,
         t, 0, -1, t, 0, 1, -t, 0, -1, -t, 0, 1;
  d.V.rowwise().normalize();
  d.F = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
         {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
         {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
         {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  return d;
}

// One 4-to-1 subdivision step with re-projection onto the unit sphere.
void subdivide_on_sphere(TriData& d) {
  std::map<int64_t, int> midpoint;
  std::vector<Eigen::Vector3d> verts;
  verts.reserve(static_cast<size_t>(d.V.rows()) * 4);
  for (int i = 0; i < d.V.rows(); ++i) verts.push_back(d.V.row(i));
  auto mid = [&](int a, int b) {
    const int64_t key = static_cast<int64_t>(std::min(a, b)) * (1 << 22) + std::max(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    Eigen::Vector3d m = (verts[a] + verts[b]).normalized();
    verts.push_back(m);
    const int idx = static_cast<int>(verts.size()) - 1;
    midpoint[key] = idx;
    return idx;
  };
  std::vector<Tri> faces;
  faces.reserve(d.F.size() * 4);
  for (const Tri& f : d.F) {
    const int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
    faces.push_back({f[0], ab, ca});
    faces.push_back({f[1], bc, ab});
    faces.push_back({f[2], ca, bc});
    faces.push_back({ab, bc, ca});
  }
  d.V.resize(static_cast<Eigen::Index>(verts.size()), 3);
  for (size_t i = 0; i < verts.size(); ++i) d.V.row(static_cast<Eigen::Index>(i)) = verts[i];
  d.F = std::move(faces);
}

TriData unit_icosphere(int refine) {
  TriData d = icosahedron();
  for (int k = 0; k < refine; ++k) subdivide_on_sphere(d);
  return d;
}

// Icosahedron rotated so a vertex sits at +z (and its antipode at -z).
// One subdivision then yields a closed loop of vertices exactly on the
// equator, letting the sphere be split into two congruent halves.
TriData icosahedron_polar() {
  TriData d = icosahedron();
  const double t = 0.5 * (1.0 + std::sqrt(5.0));
  const double n = std::sqrt(1.0 + t * t);
  const double c = t / n, s = 1.0 / n;
  for (int i = 0; i < d.V.rows(); ++i) {
    const double y = d.V(i, 1), z = d.V(i, 2);
    d.V(i, 1) = y * c - z * s;
    d.V(i, 2) = y * s + z * c;
  }
  return d;
}

TriData unit_hemisphere(int refine) {
  // The polar icosphere keeps the stencil quality of the closed icosphere,
  // which the octahedral half-sphere cannot match (its mid-latitude
  // two-rings are skewed enough to cost ~2% on fitted curvatures).
  TriData d = icosahedron_polar();
  subdivide_on_sphere(d);  // creates the equatorial loop
  for (int k = 1; k < refine; ++k) subdivide_on_sphere(d);
  std::vector<int> remap(d.V.rows(), -1);
  std::vector<int> keep;
  std::vector<Tri> faces;
  for (const Tri& f : d.F) {
    if (d.V(f[0], 2) < -1e-9 || d.V(f[1], 2) < -1e-9 || d.V(f[2], 2) < -1e-9)
      continue;
    Tri g;
    for (int c2 = 0; c2 < 3; ++c2) {
      if (remap[f[c2]] < 0) {
        remap[f[c2]] = static_cast<int>(keep.size());
        keep.push_back(f[c2]);
      }
      g[c2] = remap[f[c2]];
    }
    faces.push_back(g);
  }
  TriData out;
  out.V.resize(static_cast<Eigen::Index>(keep.size()), 3);
  for (size_t i = 0; i < keep.size(); ++i) {
    out.V.row(static_cast<Eigen::Index>(i)) = d.V.row(keep[i]);
    if (std::abs(out.V(static_cast<Eigen::Index>(i), 2)) < 1e-9)
      out.V(static_cast<Eigen::Index>(i), 2) = 0.0;  // snap the rim
  }
  out.F = std::move(faces);
  return out;
}

TriData hex_disk(double R, int refine) {
  const int m = 1 << (refine + 1);  // rings
  const double h = R / m;
  TriData d;
  std::vector<Eigen::Vector3d> verts;
  verts.emplace_back(0, 0, 0);
  auto base = [](int j) { return j == 0 ? 0 : 1 + 3 * j * (j - 1); };
  for (int j = 1; j <= m; ++j) {
    for (int i = 0; i < 6 * j; ++i) {
      const double ang = 2.0 * M_PI * i / (6.0 * j);
      verts.emplace_back(j * h * std::cos(ang), j * h * std::sin(ang), 0);
    }
  }
  for (int j = 1; j <= m; ++j) {
    const int nj = 6 * j, ni = 6 * (j - 1);
    for (int s = 0; s < 6; ++s) {
      for (int t = 0; t < j; ++t) {
        const int o0 = base(j) + (s * j + t) % nj;
        const int o1 = base(j) + (s * j + t + 1) % nj;
        const int i0 = j == 1 ? 0 : base(j - 1) + (s * (j - 1) + t) % ni;
        d.F.push_back({o0, o1, i0});
        if (t + 1 < j) {
          const int i1 = base(j - 1) + (s * (j - 1) + t + 1) % ni;
          d.F.push_back({i0, o1, i1});
        }
      }
    }
  }
  d.V.resize(static_cast<Eigen::Index>(verts.size()), 3);
  for (size_t i = 0; i < verts.size(); ++i) d.V.row(static_cast<Eigen::Index>(i)) = verts[i];
  return d;
}

TriData annulus_grid(double r0, double r1, int refine) {
  const int m = 1 << refine;  // radial divisions
  const double hr = (r1 - r0) / m;
  const int ntheta = std::max<int>(8, std::lround(2.0 * M_PI * r1 / hr));
  TriData d;
  d.V.resize(static_cast<Eigen::Index>((m + 1) * ntheta), 3);
  for (int j = 0; j <= m; ++j) {
    const double r = r0 + j * hr;
    for (int i = 0; i < ntheta; ++i) {
      const double ang = 2.0 * M_PI * i / ntheta;
      d.V.row(static_cast<Eigen::Index>(j) * ntheta + i)
          << r * std::cos(ang), r * std::sin(ang), 0;
    }
  }
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < ntheta; ++i) {
      const int a = j * ntheta + i;
      const int b = j * ntheta + (i + 1) % ntheta;
      const int c = (j + 1) * ntheta + i;
      const int e = (j + 1) * ntheta + (i + 1) % ntheta;
      d.F.push_back({a, b, c});
      d.F.push_back({b, e, c});
    }
  }
  return d;
}

// Tangential pseudo-random displacement of size <= jitter * local edge
// length, applied only where `movable` allows; re-projected by `fixup`.
template <typename Movable, typename Fixup>
void apply_jitter(TriData& d, double jitter, uint64_t seed, Movable movable, Fixup fixup) {
  if (jitter == 0.0) return;
  std::vector<double> local_h(static_cast<size_t>(d.V.rows()),
                              std::numeric_limits<double>::infinity());
  for (const Tri& f : d.F) {
    for (int k = 0; k < 3; ++k) {
      const int a = f[k], b = f[(k + 1) % 3];
      const double L = (d.V.row(a) - d.V.row(b)).norm();
      local_h[a] = std::min(local_h[a], L);
      local_h[b] = std::min(local_h[b], L);
    }
  }
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  for (int v = 0; v < d.V.rows(); ++v) {
    Eigen::Vector3d step;
    for (int k = 0; k < 3; ++k) step[k] = sym_rand(rng);  // fixed draw order
    if (!movable(v, d.V.row(v))) continue;
    step *= 0.5 * jitter * local_h[static_cast<size_t>(v)];
    d.V.row(v) = fixup(d.V.row(v).transpose().eval(), step);
  }
}

ImmersedMesh lift_euclidean(const TriData& d, const DensitySpec& dens) {
  SpaceForm space(0.0, 3);
  Vec f = evaluate_density(dens, d.V);
  return ImmersedMesh::surface(space, d.V, d.F, f);
}

}  // namespace

Vec evaluate_density(const DensitySpec& spec, const Mat& vertices) {
  const int n = static_cast<int>(vertices.rows());
  if (spec.kind == "zero") return Vec::Zero(n);
  if (spec.kind == "linear") {
    return spec.coeff * vertices.col(vertices.cols() - 1);
  }
  if (spec.kind == "quadratic") {
    return spec.coeff * vertices.rowwise().squaredNorm();
  }
  throw ConfigError("unknown density preset '" + spec.kind + "'");
}

ImmersedMesh generate_shape(const ShapeSpec& spec) {
  if (spec.refine < 0 || spec.refine > 8) {
    throw ConfigError("refinement must be in [0, 8]");
  }
  if (spec.jitter < 0.0 || spec.jitter > 0.5) {
    throw ConfigError("jitter must be in [0, 0.5]");
  }
  const auto on_sphere = [](const Eigen::Vector3d& x, const Eigen::Vector3d& step) {
    return (x + step - x.dot(step) * x).normalized();
  };

  if (spec.kind == "round_sphere") {
    if (spec.radius <= 0) throw ConfigError("round_sphere: radius must be positive");
    TriData d = unit_icosphere(spec.refine);
    apply_jitter(d, spec.jitter, spec.seed, [](int, auto) { return true; }, on_sphere);
    d.V *= spec.radius;
    return lift_euclidean(d, spec.density);
  }
  if (spec.kind == "ellipsoid") {
    if (spec.a <= 0 || spec.b <= 0 || spec.c <= 0) {
      throw ConfigError("ellipsoid: semi-axes must be positive");
    }
    TriData d = unit_icosphere(spec.refine);
    apply_jitter(d, spec.jitter, spec.seed, [](int, auto) { return true; }, on_sphere);
    d.V.col(0) *= spec.a;
    d.V.col(1) *= spec.b;
    d.V.col(2) *= spec.c;
    return lift_euclidean(d, spec.density);
  }
  if (spec.kind == "hemisphere") {
    TriData d = unit_hemisphere(spec.refine);
    apply_jitter(
        d, spec.jitter, spec.seed,
        [](int, const auto& x) { return x[2] > 1e-9; }, on_sphere);
    return lift_euclidean(d, spec.density);
  }
  if (spec.kind == "flat_disk") {
    if (spec.radius <= 0) throw ConfigError("flat_disk: radius must be positive");
    TriData d = hex_disk(spec.radius, spec.refine);
    const double rim = spec.radius * (1.0 - 1e-9);
    apply_jitter(
        d, spec.jitter, spec.seed,
        [&](int, const auto& x) { return x.norm() < rim; },
        [](const Eigen::Vector3d& x, const Eigen::Vector3d& step) {
          Eigen::Vector3d y = x + step;
          y[2] = 0;
          return y;
        });
    return lift_euclidean(d, spec.density);
  }
  if (spec.kind == "annulus") {
    if (!(0 < spec.r0 && spec.r0 < spec.r1)) {
      throw ConfigError("annulus: need 0 < r0 < r1");
    }
    TriData d = annulus_grid(spec.r0, spec.r1, spec.refine);
    apply_jitter(
        d, spec.jitter, spec.seed,
        [&](int, const auto& x) {
          const double r = x.norm();
          return r > spec.r0 * (1 + 1e-9) && r < spec.r1 * (1 - 1e-9);
        },
        [](const Eigen::Vector3d& x, const Eigen::Vector3d& step) {
          Eigen::Vector3d y = x + step;
          y[2] = 0;
          return y;
        });
    return lift_euclidean(d, spec.density);
  }
  if (spec.kind == "geodesic_sphere_in_S3" || spec.kind == "spherical_cap_in_S3") {
    // Unit 3-sphere: inject the unit direction sphere at geodesic radius rho
    // around the pole (0,0,0,1).  The cap variant keeps the upper half, so
    // its boundary is the circle of latitude of the same geodesic sphere.
    if (!(spec.rho > 0 && spec.rho < 0.5 * M_PI)) {
      throw ConfigError(spec.kind + ": need 0 < rho < pi/2 on the unit 3-sphere");
    }
    TriData d = spec.kind == "spherical_cap_in_S3" ? unit_hemisphere(spec.refine)
                                                   : unit_icosphere(spec.refine);
    apply_jitter(
        d, spec.jitter, spec.seed,
        [&](int, const auto& x) {
          return spec.kind == "spherical_cap_in_S3" ? x[2] > 1e-9 : true;
        },
        on_sphere);
    SpaceForm space(1.0, 3);
    Mat V(d.V.rows(), 4);
    const double s = std::sin(spec.rho), c = std::cos(spec.rho);
    V.leftCols(3) = s * d.V;
    V.col(3).setConstant(c);
    Vec f = evaluate_density(spec.density, V);
    return ImmersedMesh::surface(space, V, d.F, f);
  }
  if (spec.kind == "geodesic_sphere_in_H3") {
    if (!(spec.rho > 0)) throw ConfigError("geodesic_sphere_in_H3: need rho > 0");
    TriData d = unit_icosphere(spec.refine);
    apply_jitter(d, spec.jitter, spec.seed, [](int, auto) { return true; }, on_sphere);
    SpaceForm space(-1.0, 3);
    Mat V(d.V.rows(), 4);
    const double s = std::sinh(spec.rho), c = std::cosh(spec.rho);
    V.col(0).setConstant(c);  // timelike coordinate first
    V.rightCols(3) = s * d.V;
    Vec f = evaluate_density(spec.density, V);
    return ImmersedMesh::surface(space, V, d.F, f);
  }
  throw ConfigError("unknown shape kind '" + spec.kind + "'");
}

}  // namespace rv
