#include <doctest.h>

#include <cmath>
#include <random>

#include "rv/space_form.hpp"

using namespace rv;

namespace {

Vec vec3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

Vec vec4(double x, double y, double z, double w) {
  Vec v(4);
  v << x, y, z, w;
  return v;
}

// Deterministic point on each model for property tests.
Vec random_point(const SpaceForm& space, std::mt19937& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  if (space.flat()) {
    Vec p(space.rep_dim());
    for (int i = 0; i < p.size(); ++i) p[i] = g(rng);
    return p;
  }
  if (space.delta() > 0.0) {
    Vec p(space.rep_dim());
    for (int i = 0; i < p.size(); ++i) p[i] = g(rng);
    return p / (p.norm() * std::sqrt(space.delta()));
  }
  // Hyperboloid: exponentiate a tangent vector at the apex.
  Vec apex = Vec::Zero(space.rep_dim());
  apex[0] = 1.0 / std::sqrt(-space.delta());
  Vec v = Vec::Zero(space.rep_dim());
  for (int i = 1; i < v.size(); ++i) v[i] = 0.7 * g(rng);
  return space.exp_map(apex, v);
}

}  // namespace

TEST_CASE("radial profile matches closed forms") {
  auto pr = radial_profile(1.0, M_PI / 2.0);
  CHECK(pr.s == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(pr.c) < 1e-14);

  pr = radial_profile(0.0, 1.7);
  CHECK(pr.s == 1.7);
  CHECK(pr.c == 1.0);

  pr = radial_profile(-1.0, 1.0);
  CHECK(pr.s == doctest::Approx(std::sinh(1.0)).epsilon(1e-15));
  CHECK(pr.c == doctest::Approx(std::cosh(1.0)).epsilon(1e-15));
}

TEST_CASE("profile identity c^2 + delta s^2 = 1") {
  for (double delta : {-2.0, -1.0, -0.3, 0.0, 0.4, 1.0, 2.7}) {
    for (double r : {1e-9, 1e-5, 0.3, 1.0, 3.0}) {
      const auto pr = radial_profile(delta, r);
      CHECK(pr.c * pr.c + delta * pr.s * pr.s == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("profile derivatives s' = c and c' = -delta s") {
  const double h = 1e-5;
  for (double delta : {-1.5, -1.0, 0.0, 1.0, 2.0}) {
    for (double r : {0.05, 0.4, 1.1}) {
      const auto pm = radial_profile(delta, r - h);
      const auto pp = radial_profile(delta, r + h);
      const auto p0 = radial_profile(delta, r);
      CHECK((pp.s - pm.s) / (2 * h) == doctest::Approx(p0.c).epsilon(1e-8));
      CHECK((pp.c - pm.c) / (2 * h) == doctest::Approx(-delta * p0.s).epsilon(1e-8));
    }
  }
}

TEST_CASE("profile series branch is continuous at the switch point") {
  for (double delta : {-1.0, 1.0}) {
    for (double r : {0.99e-4, 1.01e-4}) {
      const auto pr = radial_profile(delta, r);
      const double exact_s = delta > 0 ? std::sin(r) : std::sinh(r);
      const double exact_c = delta > 0 ? std::cos(r) : std::cosh(r);
      CHECK(pr.s == doctest::Approx(exact_s).epsilon(1e-15));
      CHECK(pr.c == doctest::Approx(exact_c).epsilon(1e-15));
    }
  }
  CHECK(radial_profile_over_r(1.0, 0.0) == 1.0);
  CHECK(radial_profile_over_r(0.0, 2.0) == 1.0);
}

TEST_CASE("geodesic distances on the three models") {
  SpaceForm flat(0.0, 3);
  CHECK(flat.geodesic_distance(vec3(1, 2, 2), vec3(4, 2, 6)) == doctest::Approx(5.0));

  SpaceForm sph(1.0, 3);
  CHECK(sph.geodesic_distance(vec4(1, 0, 0, 0), vec4(0, 1, 0, 0)) ==
        doctest::Approx(M_PI / 2).epsilon(1e-14));

  SpaceForm hyp(-1.0, 3);
  CHECK(hyp.geodesic_distance(vec4(1, 0, 0, 0), vec4(std::cosh(1.0), std::sinh(1.0), 0, 0)) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("distance rejects off-model points on curved spaces") {
  SpaceForm sph(1.0, 3);
  CHECK_THROWS_AS(sph.geodesic_distance(vec4(1.1, 0, 0, 0), vec4(0, 1, 0, 0)), DomainError);
  SpaceForm hyp(-1.0, 3);
  // Lower hyperboloid sheet is not part of the model.
  CHECK_THROWS_AS(hyp.geodesic_distance(vec4(-1, 0, 0, 0), vec4(1, 0, 0, 0)), DomainError);
}

TEST_CASE("exp/log round trip on all models") {
  std::mt19937 rng(991);
  std::normal_distribution<double> g(0.0, 1.0);
  for (double delta : {0.0, 1.0, 0.5, -1.0, -0.7}) {
    SpaceForm space(delta, 3);
    for (int trial = 0; trial < 25; ++trial) {
      const Vec p = random_point(space, rng);
      Vec v(space.rep_dim());
      for (int i = 0; i < v.size(); ++i) v[i] = g(rng);
      if (!space.flat()) v -= (space.dot(v, p) * delta) * p;  // make tangent
      const double target = 0.3 + 0.5 * std::abs(g(rng));
      v *= target / space.norm(v);
      const Vec x = space.exp_map(p, v);
      CHECK(space.is_valid_point(x, 1e-9));
      CHECK(space.geodesic_distance(p, x) == doctest::Approx(target).epsilon(1e-10));
      const Vec w = space.log_map(p, x);
      CHECK((w - v).norm() <= 1e-9 * std::max(1.0, v.norm()));
    }
  }
}

TEST_CASE("log map rejects the antipode, exp rejects non-tangent input") {
  SpaceForm sph(1.0, 3);
  CHECK_THROWS_AS(sph.log_map(vec4(1, 0, 0, 0), vec4(-1, 0, 0, 0)), DomainError);
  CHECK_THROWS_AS(sph.exp_map(vec4(1, 0, 0, 0), vec4(1, 0, 0, 0)), DomainError);
}

TEST_CASE("triangle inequality holds on random triples") {
  std::mt19937 rng(17);
  for (double delta : {0.0, 1.0, -1.0}) {
    SpaceForm space(delta, 3);
    for (int trial = 0; trial < 40; ++trial) {
      const Vec a = random_point(space, rng);
      const Vec b = random_point(space, rng);
      const Vec c = random_point(space, rng);
      CHECK(space.geodesic_distance(a, c) <=
            space.geodesic_distance(a, b) + space.geodesic_distance(b, c) + 1e-12);
    }
  }
}

TEST_CASE("radial gradient and position field") {
  std::mt19937 rng(23);
  for (double delta : {0.0, 1.0, -1.0}) {
    SpaceForm space(delta, 3);
    for (int trial = 0; trial < 10; ++trial) {
      const Vec p = random_point(space, rng);
      const Vec x = random_point(space, rng);
      const double r = space.geodesic_distance(p, x);
      if (r < 0.1 || (delta > 0 && r > 2.5)) continue;
      const Vec grad = space.radial_gradient(p, x);
      CHECK(space.norm(grad) == doctest::Approx(1.0).epsilon(1e-10));
      const Vec X = space.position_field(p, x);
      const auto pr = radial_profile(delta, r);
      CHECK((X - pr.s * grad).norm() < 1e-10 * std::max(1.0, X.norm()));
      if (!space.flat()) {
        // Tangency at x in the model form.
        CHECK(std::abs(space.dot(X, x)) * std::abs(delta) < 1e-10);
      }
    }
  }
}

TEST_CASE("position field along a geodesic from the base point") {
  // At distance r from p the position field has length s(r).
  SpaceForm sph(1.0, 3);
  const Vec p = vec4(0, 0, 0, 1);
  const Vec q = vec4(std::sin(0.8), 0, 0, std::cos(0.8));
  CHECK(sph.norm(sph.position_field(p, q)) == doctest::Approx(std::sin(0.8)).epsilon(1e-12));

  SpaceForm hyp(-1.0, 3);
  const Vec ap = vec4(1, 0, 0, 0);
  const Vec bq = vec4(std::cosh(0.8), std::sinh(0.8), 0, 0);
  CHECK(hyp.norm(hyp.position_field(ap, bq)) == doctest::Approx(std::sinh(0.8)).epsilon(1e-12));
}

TEST_CASE("tangent basis is orthonormal and deterministic") {
  std::mt19937 rng(5);
  for (double delta : {0.0, 1.0, -1.0}) {
    SpaceForm space(delta, 3);
    const Vec p = random_point(space, rng);
    const Mat B = space.tangent_basis(p);
    REQUIRE(B.cols() == 3);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        CHECK(space.dot(B.col(i), B.col(j)) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
      }
      if (!space.flat()) CHECK(std::abs(space.dot(B.col(i), p)) < 1e-12);
    }
    const Mat B2 = space.tangent_basis(p);
    CHECK((B - B2).norm() == 0.0);
  }
}

TEST_CASE("project_to_model rescales and validates") {
  SpaceForm sph(2.0, 3);
  Vec x = vec4(3, 0, 0, 0);
  const Vec y = sph.project_to_model(x);
  CHECK(sph.constraint_defect(y) < 1e-14);
  SpaceForm hyp(-1.0, 3);
  CHECK_THROWS_AS(hyp.project_to_model(vec4(-2, 0, 0, 0)), DomainError);
}

TEST_CASE("radial frame collects distances, coordinates, and positions") {
  SpaceForm sph(1.0, 3);
  const Vec p = vec4(0, 0, 0, 1);
  Mat verts(3, 4);
  verts.row(0) = vec4(std::sin(0.3), 0, 0, std::cos(0.3)).transpose();
  verts.row(1) = vec4(0, std::sin(1.2), 0, std::cos(1.2)).transpose();
  verts.row(2) = vec4(0, 0, std::sin(1.7), std::cos(1.7)).transpose();
  const RadialFrame fr = radial_frame(sph, p, verts);
  CHECK(fr.r[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(fr.r[1] == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(fr.r[2] == doctest::Approx(1.7).epsilon(1e-12));
  for (int i = 0; i < 3; ++i) {
    CHECK(fr.normal_coords.row(i).norm() == doctest::Approx(fr.r[i]).epsilon(1e-12));
    CHECK(fr.s[i] == doctest::Approx(std::sin(fr.r[i])).epsilon(1e-12));
  }
  CHECK_FALSE(fr.within_polar_cap);  // r = 1.7 exceeds pi/2

  Mat near = verts.topRows(2);
  const RadialFrame fr2 = radial_frame(sph, p, near);
  CHECK(fr2.within_polar_cap);
  CHECK(fr2.max_radius == doctest::Approx(1.2));
}
