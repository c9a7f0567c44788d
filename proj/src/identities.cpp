#include <algorithm>
#include <cmath>
#include <limits>

#include "rv/bounds.hpp"

namespace rv {

namespace {

constexpr double kPi = 3.14159265358979323846;

double normalizer(double lhs, double rhs) {
  return std::max({std::abs(lhs), std::abs(rhs), 1e-30});
}

// worst: signed, positive toward violation; spread: largest magnitude.
std::string identity_status(double worst, double spread, double eq_tol,
                            double hold_tol) {
  if (spread <= eq_tol) return "equality_within_tol";
  if (worst <= hold_tol) return "holds";
  return "violated";
}

IdentityReport scalar_identity(const std::string& id, double lhs, double rhs,
                               const Tolerances& tol, double scale = 0.0) {
  IdentityReport rep;
  rep.identity_id = id;
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.residual = (lhs - rhs) / std::max(scale, normalizer(lhs, rhs));
  rep.status = identity_status(rep.residual, std::abs(rep.residual),
                               tol.equality_tol, tol.identity_tol);
  rep.locus = "integral";
  return rep;
}

IdentityReport unmet_identity(const std::string& id, const std::string& why) {
  IdentityReport rep;
  rep.identity_id = id;
  rep.status = "hypotheses_unmet";
  rep.note = why;
  return rep;
}

Vec row_norms(const SpaceForm& space, const Mat& rows) {
  Vec out = Vec::Zero(rows.rows());
  for (int i = 0; i < rows.rows(); ++i) {
    const Vec v = rows.row(i).transpose();
    out[i] = std::sqrt(std::max(0.0, space.dot(v, v)));
  }
  return out;
}

// Data shared by the checks that live on the surface itself.
struct SurfaceData {
  const ImmersedMesh* mesh;
  const WeightedMeasures* wm;
  const CurvatureField* field;
  const TangentTensorField* T;
  const DriftField* drift;
  const RadialFrame* rad;
  Tolerances tol;
};

// Weak per-vertex form of the pointwise divergence lower bound
//   div_f(T X^T) >= tr(T) c_delta + <X, H_T - T grad f>,
// tested against every interior hat function: integration by parts turns
// the left side into -int <grad phi_v, T X^T> without boundary terms.
IdentityReport pointwise_divergence_check(const SurfaceData& d) {
  const ImmersedMesh& mesh = *d.mesh;
  const SpaceForm& space = mesh.space();
  const int nv = mesh.num_vertices();

  if (!d.T->divergence_free)
    return unmet_identity("HM_POINTWISE", "requires a divergence-free tensor");

  // Per-vertex scalar field of the right side of the inequality.
  Vec g = Vec::Zero(nv);
  for (int v = 0; v < nv; ++v) {
    const Vec x = d.rad->position.row(v).transpose();
    const Vec dr = d.drift->drift.row(v).transpose();
    g[v] = d.drift->trace[v] * d.rad->c[v] + space.dot(x, dr);
  }

  Vec lhs_weak = Vec::Zero(nv);  // int g phi_v mu_f
  Vec rhs_weak = Vec::Zero(nv);  // int div_f(T X^T) phi_v mu_f, weakly
  const auto& tris = mesh.triangles();
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const TriangleChart& ch = mesh.charts()[t];
    const Tri& tri = tris[t];

    // Chart coordinates of the tangential part of X, averaged corners.
    // Project onto each corner's fitted tangent plane first: the raw
    // ambient field has a normal component whose in-plane shadow would
    // not vanish under refinement.
    Vec2 u = Vec2::Zero();
    for (int c = 0; c < 3; ++c) {
      const Vec x = d.rad->position.row(tri[c]).transpose();
      const Mat& fr = d.field->frame[tri[c]];
      const Vec xt =
          fr.col(0) * space.dot(x, fr.col(0)) + fr.col(1) * space.dot(x, fr.col(1));
      u[0] += space.dot(xt, ch.frame.col(0)) / 3.0;
      u[1] += space.dot(xt, ch.frame.col(1)) / 3.0;
    }
    Mat2 tm;
    tm << d.T->entries(t, 0), d.T->entries(t, 1), d.T->entries(t, 1),
        d.T->entries(t, 2);
    const Vec2 tu = tm * u;
    for (int c = 0; c < 3; ++c)
      rhs_weak[tri[c]] -=
          d.wm->element_weight[t] * ch.grad.col(c).dot(tu);

    // Mid-edge quadrature of g against each hat function.
    for (int e = 0; e < 3; ++e) {
      const int i = tri[e], j = tri[(e + 1) % 3];
      const double wmid =
          ch.area / 3.0 *
          std::exp(-0.5 * (mesh.density()[i] + mesh.density()[j]));
      const double gmid = 0.5 * (g[i] + g[j]);
      lhs_weak[i] += 0.5 * wmid * gmid;
      lhs_weak[j] += 0.5 * wmid * gmid;
    }
  }

  const double scale =
      (d.drift->trace.array().abs() * d.rad->c.array().abs() +
       d.rad->s.array() * d.drift->norm.array())
          .maxCoeff() +
      1e-30;
  double worst = -std::numeric_limits<double>::infinity();
  double spread = 0.0;
  int worst_vertex = -1;
  double worst_lhs = 0.0, worst_rhs = 0.0;
  int tested = 0;
  for (int v = 0; v < nv; ++v) {
    if (mesh.is_boundary_vertex(v)) continue;  // boundary term not tested
    ++tested;
    const double denom = d.wm->lumped_vertex[v] * scale;
    const double res = (lhs_weak[v] - rhs_weak[v]) / std::max(denom, 1e-300);
    spread = std::max(spread, std::abs(res));
    if (res > worst) {
      worst = res;
      worst_vertex = v;
      worst_lhs = lhs_weak[v] / std::max(denom, 1e-300);
      worst_rhs = rhs_weak[v] / std::max(denom, 1e-300);
    }
  }
  if (tested == 0)
    return unmet_identity("HM_POINTWISE", "no interior vertices to test");

  IdentityReport rep;
  rep.identity_id = "HM_POINTWISE";
  rep.lhs = worst_lhs;
  rep.rhs = worst_rhs;
  rep.residual = worst;
  rep.status = identity_status(worst, spread, d.tol.equality_tol,
                               d.tol.identity_tol);
  rep.locus = "vertex " + std::to_string(worst_vertex);
  rep.note = mesh.closed()
                 ? "weak form against hat functions"
                 : "weak form against interior hat functions only";
  return rep;
}

IdentityReport integral_divergence_check(const SurfaceData& d) {
  const ImmersedMesh& mesh = *d.mesh;
  if (!mesh.closed())
    return unmet_identity("HM_INTEGRAL", "requires a closed mesh");
  if (!d.T->divergence_free)
    return unmet_identity("HM_INTEGRAL", "requires a divergence-free tensor");
  const SpaceForm& space = mesh.space();
  const int nv = mesh.num_vertices();
  const Vec lhs_field =
      (d.drift->trace.array() * d.rad->c.array()).matrix();
  Vec g = Vec::Zero(nv);
  for (int v = 0; v < nv; ++v)
    g[v] = space.dot(d.rad->position.row(v).transpose(),
                     d.drift->drift.row(v).transpose());
  return scalar_identity("HM_INTEGRAL", integrate_scalar(mesh, lhs_field),
                         -integrate_scalar(mesh, g), d.tol);
}

IdentityReport weighted_position_check(const SurfaceData& d) {
  const ImmersedMesh& mesh = *d.mesh;
  if (!mesh.closed())
    return unmet_identity("HM_WEIGHTED_X", "requires a closed mesh");
  if (!d.T->divergence_free)
    return unmet_identity("HM_WEIGHTED_X", "requires a divergence-free tensor");
  const SpaceForm& space = mesh.space();
  const int nv = mesh.num_vertices();
  const double delta = space.delta();

  // <T X^T, X^T> per vertex in the fitted vertex frame.
  const Mat tv = vertex_tensor(mesh, *d.field, *d.T);
  Vec q = Vec::Zero(nv);
  for (int v = 0; v < nv; ++v) {
    const Vec x = d.rad->position.row(v).transpose();
    const double x1 = space.dot(x, d.field->frame[v].col(0));
    const double x2 = space.dot(x, d.field->frame[v].col(1));
    q[v] = tv(v, 0) * x1 * x1 + 2.0 * tv(v, 1) * x1 * x2 + tv(v, 2) * x2 * x2;
  }
  const double trace_part = integrate_scalar(
      mesh, (d.drift->trace.array() * d.rad->c.array().square()).matrix());
  const double drift_part = integrate_scalar(
      mesh,
      (d.drift->norm.array() * d.rad->s.array() * d.rad->c.array()).matrix());
  const double lhs = trace_part - drift_part;
  const double rhs = delta * integrate_scalar(mesh, q);
  // Normalize by the size of the constituent integrals: on flat shapes the
  // two sides nearly cancel and the raw difference alone would exaggerate
  // the residual.
  return scalar_identity("HM_WEIGHTED_X", lhs, rhs, d.tol,
                         std::abs(trace_part) + std::abs(drift_part));
}

// Trianglewise energy inequality for the radial test functions
//   sum_i <T grad((s(r)/r) x_i), grad((s(r)/r) x_i)>
//     <= tr(T) - delta <T X^T, X^T>,
// with the test functions interpolated linearly and differentiated per
// chart.  The admissible margin carries an O(h^2) discretization term.
IdentityReport radial_energy_check(const SurfaceData& d) {
  const ImmersedMesh& mesh = *d.mesh;
  const SpaceForm& space = mesh.space();
  const int nv = mesh.num_vertices();
  const int dim = space.dim();
  const double delta = space.delta();

  Mat test = Mat::Zero(nv, dim);
  for (int v = 0; v < nv; ++v)
    test.row(v) = radial_profile_over_r(delta, d.rad->r[v]) *
                  d.rad->normal_coords.row(v);

  const double h = mesh.mean_edge_length();
  const double margin = std::max(d.tol.identity_tol, 5.0 * h * h);

  double worst = -std::numeric_limits<double>::infinity();
  double spread = 0.0;
  int worst_tri = -1;
  double worst_lhs = 0.0, worst_rhs = 0.0;
  const auto& tris = mesh.triangles();
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const TriangleChart& ch = mesh.charts()[t];
    const Tri& tri = tris[t];
    Mat2 tm;
    tm << d.T->entries(t, 0), d.T->entries(t, 1), d.T->entries(t, 1),
        d.T->entries(t, 2);

    double lhs = 0.0;
    for (int i = 0; i < dim; ++i) {
      Eigen::Vector3d corner(test(tri[0], i), test(tri[1], i),
                             test(tri[2], i));
      const Vec2 grad = ch.grad * corner;
      lhs += grad.dot(tm * grad);
    }

    Vec2 u = Vec2::Zero();
    for (int c = 0; c < 3; ++c) {
      const Vec x = d.rad->position.row(tri[c]).transpose();
      u[0] += space.dot(x, ch.frame.col(0)) / 3.0;
      u[1] += space.dot(x, ch.frame.col(1)) / 3.0;
    }
    const double rhs =
        d.T->entries(t, 0) + d.T->entries(t, 2) - delta * u.dot(tm * u);

    const double res = (lhs - rhs) / normalizer(lhs, rhs);
    spread = std::max(spread, std::abs(res));
    if (res > worst) {
      worst = res;
      worst_tri = t;
      worst_lhs = lhs;
      worst_rhs = rhs;
    }
  }

  IdentityReport rep;
  rep.identity_id = "GROSJEAN_PTWISE";
  rep.lhs = worst_lhs;
  rep.rhs = worst_rhs;
  rep.residual = worst;
  rep.status = identity_status(worst, spread,
                               std::max(d.tol.equality_tol, margin), margin);
  rep.locus = "triangle " + std::to_string(worst_tri);
  rep.note = "margin=" + std::to_string(margin);
  return rep;
}

// Data for the checks on the manifold carrying the second tensor: the
// surface itself (closed scenarios) or the boundary curve.
struct RadialData {
  const ImmersedMesh* mesh;
  const WeightedMeasures* wm;
  Vec trace;       // tr(S) per vertex
  Vec drift_norm;  // ||H_S - S grad f|| per vertex
  const RadialFrame* rad;
  Tolerances tol;
};

IdentityReport radial_balance_check(const RadialData& d) {
  const Vec lhs_field =
      (d.trace.array() * d.rad->s.array() * d.rad->c.array()).matrix();
  const Vec rhs_field =
      (d.drift_norm.array() * d.rad->s.array().square()).matrix();
  return scalar_identity("LEMSD", integrate_scalar(*d.mesh, lhs_field),
                         integrate_scalar(*d.mesh, rhs_field), d.tol);
}

IdentityReport mean_square_radius_check(const RadialData& d) {
  const double delta = d.mesh->space().delta();
  if (delta > 0.0)
    return unmet_identity("LEM31", "requires delta <= 0");
  const double inf_tr = d.trace.minCoeff();
  const double sup_dn = d.drift_norm.maxCoeff();
  const double denom = delta + sup_dn * sup_dn / (inf_tr * inf_tr);
  if (denom <= 0.0)
    return unmet_identity("LEM31",
                          "drift/trace ratio does not dominate |delta|");
  const double lhs = 1.0 / denom;
  const double rhs =
      integrate_scalar(*d.mesh, d.rad->s.array().square().matrix()) /
      d.wm->volume;
  return scalar_identity("LEM31", lhs, rhs, d.tol);
}

IdentityReport mean_cosine_check(const RadialData& d) {
  const double delta = d.mesh->space().delta();
  if (delta <= 0.0)
    return unmet_identity("LEM32", "requires delta > 0");
  if (!d.rad->within_polar_cap)
    return unmet_identity(
        "LEM32", "mesh is not inside a ball of radius pi/(2 sqrt(delta))");
  const double inf_tr = d.trace.minCoeff();
  const double mean_c =
      integrate_scalar(*d.mesh, d.rad->c) / d.wm->volume;
  const double beta =
      1.0 + integrate_scalar(*d.mesh,
                             d.drift_norm.array().square().matrix()) /
                (delta * inf_tr * inf_tr * d.wm->volume);
  return scalar_identity("LEM32", 1.0 / beta, 1.0 - mean_c * mean_c, d.tol);
}

IdentityReport enclosing_radius_check(const BoundaryInputs& in, double radius) {
  const double delta = in.omega->space().delta();
  const double sup_dn = in.drift_T->norm.maxCoeff();
  const double inf_tr = in.drift_T->trace.minCoeff();
  const double s_r = radial_profile(delta, radius).s;
  const double rhs = s_r * s_r * (sup_dn * sup_dn / (inf_tr * inf_tr) + delta);
  IdentityReport rep = scalar_identity("PROP5", 1.0, rhs, in.tol);
  rep.note = "R=" + std::to_string(radius);
  if (rep.status == "violated") rep.finding = true;
  return rep;
}

std::vector<IdentityReport> all_unmet(const std::string& why) {
  std::vector<IdentityReport> out;
  for (const char* id : {"HM_POINTWISE", "HM_INTEGRAL", "HM_WEIGHTED_X",
                         "LEMSD", "LEM31", "LEM32", "GROSJEAN_PTWISE",
                         "PROP5"})
    out.push_back(unmet_identity(id, why));
  return out;
}

}  // namespace

std::vector<IdentityReport> evaluate_identities(const ClosedInputs& in) {
  const ImmersedMesh& mesh = *in.mesh;
  if (!mesh.closed())
    throw DomainError("closed-scenario identities require a closed mesh");

  CenterOfMass com;
  try {
    com = center_of_mass(mesh);
  } catch (const Error& e) {
    return all_unmet(std::string("center of mass: ") + e.what());
  }
  const RadialFrame rad =
      radial_frame(mesh.space(), com.point, mesh.vertices());

  const SurfaceData surf{in.mesh, in.measures, in.field, in.T,
                         in.drift_T, &rad, in.tol};
  const RadialData second{in.mesh, in.measures, in.drift_S->trace,
                          in.drift_S->norm, &rad, in.tol};

  std::vector<IdentityReport> out;
  out.push_back(pointwise_divergence_check(surf));
  out.push_back(integral_divergence_check(surf));
  out.push_back(weighted_position_check(surf));
  out.push_back(radial_balance_check(second));
  out.push_back(mean_square_radius_check(second));
  out.push_back(mean_cosine_check(second));
  out.push_back(radial_energy_check(surf));
  out.push_back(unmet_identity("PROP5", "requires a mesh with boundary"));
  return out;
}

std::vector<IdentityReport> evaluate_identities(const BoundaryInputs& in) {
  const ImmersedMesh& omega = *in.omega;
  const ImmersedMesh& curve = *in.curve;
  if (omega.closed())
    throw DomainError("boundary-scenario identities require a boundary");

  CenterOfMass com;
  try {
    com = center_of_mass(curve);
  } catch (const Error& e) {
    return all_unmet(std::string("center of mass: ") + e.what());
  }
  const RadialFrame rad_omega =
      radial_frame(omega.space(), com.point, omega.vertices());
  const RadialFrame rad_curve =
      radial_frame(curve.space(), com.point, curve.vertices());

  const SurfaceData surf{in.omega, in.measures, in.field, in.T,
                         in.drift_T, &rad_omega, in.tol};
  const RadialData second{in.curve, in.curve_measures, *in.s_curve,
                          in.drift_S->norm, &rad_curve, in.tol};

  std::vector<IdentityReport> out;
  out.push_back(pointwise_divergence_check(surf));
  out.push_back(unmet_identity("HM_INTEGRAL", "requires a closed mesh"));
  out.push_back(unmet_identity("HM_WEIGHTED_X", "requires a closed mesh"));
  out.push_back(radial_balance_check(second));
  out.push_back(mean_square_radius_check(second));
  out.push_back(mean_cosine_check(second));
  out.push_back(radial_energy_check(surf));
  if (omega.space().delta() > 0.0)
    out.push_back(
        enclosing_radius_check(in, enclosing_radius(omega, com.point)));
  else
    out.push_back(unmet_identity("PROP5", "requires delta > 0"));
  return out;
}

}  // namespace rv
