#include <doctest.h>

#include <cmath>
#include <set>

#include "rv/mesh.hpp"
#include "rv/shapes.hpp"

using namespace rv;

namespace {

ImmersedMesh flat_square(Vec density = Vec()) {
  SpaceForm space(0.0, 3);
  Mat V(4, 3);
  V << 0, 0, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0;
  return ImmersedMesh::surface(space, V, {{0, 1, 2}, {0, 2, 3}}, density);
}

int unique_edge_count(const ImmersedMesh& m) {
  std::set<std::pair<int, int>> e;
  for (const Tri& t : m.triangles()) {
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      e.insert({std::min(a, b), std::max(a, b)});
    }
  }
  return static_cast<int>(e.size());
}

}  // namespace

TEST_CASE("induced metric of canonical triangles") {
  SpaceForm space(0.0, 3);
  SUBCASE("equilateral with unit edges has det 3/4") {
    Mat V(3, 3);
    V << 0, 0, 0, 1, 0, 0, 0.5, std::sqrt(3.0) / 2.0, 0;
    const auto m = ImmersedMesh::surface(space, V, {{0, 1, 2}}, Vec());
    const Mat2 G = induced_metric(m, 0);
    CHECK(G(0, 0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(G(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(G.determinant() == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(m.charts()[0].area == doctest::Approx(std::sqrt(3.0) / 4.0).epsilon(1e-12));
  }
  SUBCASE("right isoceles is the identity metric") {
    Mat V(3, 3);
    V << 0, 0, 0, 1, 0, 0, 0, 1, 0;
    const auto m = ImmersedMesh::surface(space, V, {{0, 1, 2}}, Vec());
    CHECK((induced_metric(m, 0) - Mat2::Identity()).norm() < 1e-13);
  }
}

TEST_CASE("flat unit square measures") {
  const auto m = flat_square();
  const auto wm = weighted_measures(m);
  CHECK(wm.volume == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(wm.boundary_volume == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(wm.lumped_vertex.sum() == doctest::Approx(wm.volume).epsilon(1e-13));
  CHECK(wm.lumped_boundary.sum() == doctest::Approx(wm.boundary_volume).epsilon(1e-13));
  CHECK(m.boundary_edges().size() == 4);
}

TEST_CASE("quadrature integrates linear and quadratic polynomials exactly") {
  const auto m = flat_square();
  Vec gx(4);
  for (int i = 0; i < 4; ++i) gx[i] = m.vertices()(i, 0);
  CHECK(integrate_scalar(m, gx) == doctest::Approx(0.5).epsilon(1e-14));
  // x^2 is quadratic but only piecewise-linear data is given; feed x*y via
  // vertex values of a P1 interpolant of a quadratic: the mid-edge rule is
  // exact for quadratic *interpolants* per triangle.
  Vec ones = Vec::Ones(4);
  CHECK(integrate_scalar(m, ones) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(integrate_boundary_scalar(m, gx) == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("sphere area converges at second order and weighting matches") {
  ShapeSpec s3;
  s3.kind = "round_sphere";
  s3.refine = 3;
  const auto m3 = generate_shape(s3);
  s3.refine = 4;
  const auto m4 = generate_shape(s3);
  const double a3 = weighted_measures(m3).volume;
  const double a4 = weighted_measures(m4).volume;
  const double exact = 4.0 * M_PI;
  CHECK(std::abs(a3 - exact) / exact < 0.01);
  CHECK(std::abs(a4 - exact) / exact < 0.003);
  const double ratio = (exact - a3) / (exact - a4);
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.0);

  ShapeSpec sw = s3;
  sw.refine = 3;
  sw.density = {"linear", 1.0};
  const double vf = weighted_measures(generate_shape(sw)).volume;
  CHECK(std::abs(vf - 4.0 * M_PI * std::sinh(1.0)) / (4.0 * M_PI * std::sinh(1.0)) < 0.01);
}

TEST_CASE("shape catalogue: counts, closedness, validity") {
  ShapeSpec s;
  s.kind = "round_sphere";
  s.refine = 3;
  const auto sphere = generate_shape(s);
  CHECK(sphere.num_vertices() == 642);
  CHECK(sphere.num_triangles() == 1280);
  CHECK(sphere.closed());
  CHECK(sphere.num_vertices() - unique_edge_count(sphere) + sphere.num_triangles() == 2);

  s.kind = "flat_disk";
  s.refine = 2;
  const auto disk = generate_shape(s);
  CHECK(disk.num_vertices() == 217);
  CHECK(disk.num_triangles() == 384);
  CHECK_FALSE(disk.closed());
  CHECK(disk.boundary_vertices().size() == 48);

  s.kind = "hemisphere";
  s.refine = 2;
  const auto hemi = generate_shape(s);
  CHECK_FALSE(hemi.closed());
  for (int v : hemi.boundary_vertices()) CHECK(hemi.vertices()(v, 2) == doctest::Approx(0.0));

  s.kind = "annulus";
  s.r0 = 0.5;
  s.r1 = 1.0;
  s.refine = 2;
  const auto ann = generate_shape(s);
  CHECK_FALSE(ann.closed());
}

TEST_CASE("curved-model spheres sit at constant geodesic radius") {
  ShapeSpec s;
  s.kind = "geodesic_sphere_in_S3";
  s.rho = M_PI / 6;
  s.refine = 2;
  const auto ms = generate_shape(s);
  Vec pole(4);
  pole << 0, 0, 0, 1;
  for (int v = 0; v < ms.num_vertices(); ++v) {
    CHECK(ms.space().geodesic_distance(pole, ms.vertex(v)) ==
          doctest::Approx(M_PI / 6).epsilon(1e-12));
  }
  CHECK(ms.closed());

  s.kind = "geodesic_sphere_in_H3";
  s.rho = 0.5;
  const auto mh = generate_shape(s);
  Vec apex(4);
  apex << 1, 0, 0, 0;
  for (int v = 0; v < mh.num_vertices(); ++v) {
    CHECK(mh.space().geodesic_distance(apex, mh.vertex(v)) ==
          doctest::Approx(0.5).epsilon(1e-12));
  }
  CHECK(mh.closed());

  s.kind = "spherical_cap_in_S3";
  s.rho = 0.4;
  const auto mc = generate_shape(s);
  CHECK_FALSE(mc.closed());
  for (int v = 0; v < mc.num_vertices(); ++v) {
    CHECK(mc.space().geodesic_distance(pole, mc.vertex(v)) ==
          doctest::Approx(0.4).epsilon(1e-12));
  }
}

TEST_CASE("shape parameter validation") {
  ShapeSpec s;
  s.kind = "geodesic_sphere_in_S3";
  s.rho = 2.0;  // >= pi/2
  CHECK_THROWS_AS(generate_shape(s), ConfigError);
  s.kind = "annulus";
  s.r0 = 1.0;
  s.r1 = 0.5;
  CHECK_THROWS_AS(generate_shape(s), ConfigError);
  s.kind = "no_such_shape";
  CHECK_THROWS_AS(generate_shape(s), ConfigError);
  s.kind = "round_sphere";
  s.refine = 9;
  CHECK_THROWS_AS(generate_shape(s), ConfigError);
}

TEST_CASE("jitter is deterministic in the seed and keeps shapes valid") {
  ShapeSpec s;
  s.kind = "round_sphere";
  s.refine = 2;
  s.jitter = 0.2;
  s.seed = 7;
  const auto a = generate_shape(s);
  const auto b = generate_shape(s);
  CHECK((a.vertices() - b.vertices()).norm() == 0.0);
  s.seed = 8;
  const auto c = generate_shape(s);
  CHECK((a.vertices() - c.vertices()).norm() > 0.0);
  for (int v = 0; v < c.num_vertices(); ++v) {
    CHECK(c.vertex(v).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  s.kind = "flat_disk";
  s.refine = 2;
  const auto d = generate_shape(s);
  for (int v : d.boundary_vertices()) {
    CHECK(d.vertex(v).norm() == doctest::Approx(1.0).epsilon(1e-12));  // rim untouched
  }
}

TEST_CASE("ellipsoid vertices satisfy the implicit equation") {
  ShapeSpec s;
  s.kind = "ellipsoid";
  s.a = 1.0;
  s.b = 1.0;
  s.c = 1.5;
  s.refine = 2;
  const auto m = generate_shape(s);
  for (int v = 0; v < m.num_vertices(); ++v) {
    const Vec x = m.vertex(v);
    const double q = x[0] * x[0] / (s.a * s.a) + x[1] * x[1] / (s.b * s.b) +
                     x[2] * x[2] / (s.c * s.c);
    CHECK(q == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("boundary complex extraction") {
  ShapeSpec s;
  s.kind = "annulus";
  s.r0 = 0.5;
  s.r1 = 1.0;
  s.refine = 2;
  const auto m = generate_shape(s);
  const auto bc = boundary_complex(m);
  CHECK(bc.intrinsic_dim() == 1);
  CHECK(bc.loop_count() == 2);
  CHECK(bc.parent_vertex().size() == static_cast<size_t>(bc.num_vertices()));
  for (int i = 0; i < bc.num_vertices(); ++i) {
    CHECK((bc.vertex(i) - m.vertex(bc.parent_vertex()[i])).norm() == 0.0);
  }
  const auto wm = weighted_measures(bc);
  const auto wms = weighted_measures(m);
  CHECK(wm.volume == doctest::Approx(wms.boundary_volume).epsilon(1e-12));
  // Polygonal circumferences approach 2*pi*(r0 + r1).
  CHECK(std::abs(wm.volume - 2 * M_PI * 1.5) / (2 * M_PI * 1.5) < 0.01);

  s.kind = "flat_disk";
  s.refine = 2;
  const auto bd = boundary_complex(generate_shape(s));
  CHECK(bd.loop_count() == 1);
}

TEST_CASE("manifold and orientation validation") {
  SpaceForm space(0.0, 3);
  Mat V(5, 3);
  V << 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 1, 1, 1;
  SUBCASE("an edge in three triangles is rejected") {
    CHECK_THROWS_AS(
        ImmersedMesh::surface(space, V, {{0, 1, 2}, {1, 0, 3}, {0, 1, 4}}, Vec()),
        ValidationError);
  }
  SUBCASE("inconsistent orientation is rejected") {
    CHECK_THROWS_AS(ImmersedMesh::surface(space, V.topRows(4), {{0, 1, 2}, {1, 2, 3}}, Vec()),
                    ValidationError);
  }
  SUBCASE("disconnected pieces are rejected") {
    Mat W(6, 3);
    W << 0, 0, 0, 1, 0, 0, 0, 1, 0, 5, 5, 5, 6, 5, 5, 5, 6, 5;
    CHECK_THROWS_AS(ImmersedMesh::surface(space, W, {{0, 1, 2}, {3, 4, 5}}, Vec()),
                    ValidationError);
  }
  SUBCASE("degenerate (collinear) triangles are rejected") {
    Mat W(3, 3);
    W << 0, 0, 0, 1, 0, 0, 2, 0, 0;
    CHECK_THROWS_AS(ImmersedMesh::surface(space, W, {{0, 1, 2}}, Vec()), ValidationError);
  }
  SUBCASE("out-of-range index is rejected") {
    CHECK_THROWS_AS(ImmersedMesh::surface(space, V, {{0, 1, 9}}, Vec()), ValidationError);
  }
  SUBCASE("unused vertices are rejected") {
    CHECK_THROWS_AS(ImmersedMesh::surface(space, V, {{0, 1, 2}}, Vec()), ValidationError);
  }
}

TEST_CASE("vertices must satisfy the model constraint") {
  SpaceForm space(1.0, 3);
  Mat V(3, 4);
  V << 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1.001, 0;
  CHECK_THROWS_AS(ImmersedMesh::surface(space, V, {{0, 1, 2}}, Vec()), ValidationError);
}

TEST_CASE("WMESH round trip preserves every field") {
  ShapeSpec s;
  s.kind = "geodesic_sphere_in_S3";
  s.rho = 0.7;
  s.refine = 1;
  s.density = {"linear", 0.5};
  const auto m = generate_shape(s);
  const std::string text = write_mesh(m);
  CHECK(text.substr(0, 15) == "WMESH SPHERE 1\n");
  const auto m2 = parse_mesh(text);
  CHECK(m2.space().delta() == m.space().delta());
  CHECK(m2.num_vertices() == m.num_vertices());
  CHECK(m2.num_triangles() == m.num_triangles());
  CHECK((m2.vertices() - m.vertices()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((m2.density() - m.density()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(write_mesh(m2) == text);

  // The file format stores surfaces; curve complexes are derived objects.
  const auto bc = boundary_complex(generate_shape([] {
    ShapeSpec d;
    d.kind = "flat_disk";
    d.refine = 1;
    return d;
  }()));
  CHECK_THROWS_AS(write_mesh(bc), DomainError);
}

TEST_CASE("WMESH parser accepts comments and rejects malformed input") {
  const std::string good =
      "# a triangle pair\nWMESH EUCLIDEAN 0\n4 2 3\n0 0 0 0\n1 0 0 0\n"
      "1 1 0 0.25\n0 1 0 0\n0 1 2\n0 2 3\n";
  const auto flat = parse_mesh(good);
  CHECK(flat.num_vertices() == 4);
  CHECK(flat.num_triangles() == 2);
  CHECK(flat.density()[2] == 0.25);

  CHECK_THROWS_AS(parse_mesh("WMESH 2\n"), ParseError);
  CHECK_THROWS_AS(parse_mesh("hello\n"), ParseError);
  CHECK_THROWS_AS(parse_mesh("WMESH TORUS 0\n1 1 3\n"), ParseError);
  // Model name and curvature sign must agree.
  CHECK_THROWS_AS(parse_mesh("WMESH EUCLIDEAN 1\n1 1 3\n"), ParseError);
  CHECK_THROWS_AS(parse_mesh("WMESH SPHERE 0\n1 1 4\n"), ParseError);
  // Truncated vertex block.
  CHECK_THROWS_AS(parse_mesh("WMESH EUCLIDEAN 0\n2 1 3\n0 0 0 0\n"), ParseError);
  // Missing density column.
  CHECK_THROWS_AS(parse_mesh("WMESH EUCLIDEAN 0\n3 1 3\n0 0 0\n1 0 0\n0 1 0\n0 1 2\n"),
                  ParseError);
  // Index out of range surfaces as a validation error after parsing.
  const std::string bad =
      "WMESH EUCLIDEAN 0\n3 1 3\n0 0 0 0\n1 0 0 0\n0 1 0 0\n0 1 7\n";
  CHECK_THROWS_AS(parse_mesh(bad), ValidationError);
  const std::string badnum =
      "WMESH EUCLIDEAN 0\n3 1 3\n0 zero 0 0\n1 0 0 0\n0 1 0 0\n0 1 2\n";
  CHECK_THROWS_AS(parse_mesh(badnum), ParseError);
  const std::string trailing =
      "WMESH EUCLIDEAN 0\n3 1 3\n0 0 0 0\n1 0 0 0\n0 1 0 0\n0 1 2\nextra\n";
  CHECK_THROWS_AS(parse_mesh(trailing), ParseError);
}
