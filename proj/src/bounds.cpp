#include "rv/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rv {

namespace {

constexpr double kPi = 3.14159265358979323846;

double normalizer(double lhs, double rhs) {
  return std::max({std::abs(lhs), std::abs(rhs), 1e-30});
}

// Model-form norms of the rows of a vector field (clamped at zero: the
// fields we measure are spacelike in the Minkowski representation).
Vec row_norms(const SpaceForm& space, const Mat& rows) {
  Vec out = Vec::Zero(rows.rows());
  for (int i = 0; i < rows.rows(); ++i) {
    const Vec v = rows.row(i).transpose();
    out[i] = std::sqrt(std::max(0.0, space.dot(v, v)));
  }
  return out;
}

bool density_is_zero(const ImmersedMesh& mesh) {
  return mesh.density().size() == 0 || mesh.density().cwiseAbs().maxCoeff() <= 1e-14;
}

bool tensor_is_identity(const TangentTensorField& T) {
  for (int t = 0; t < T.num_elements(); ++t) {
    if (std::abs(T.entries(t, 0) - 1.0) > 1e-12) return false;
    if (std::abs(T.entries(t, 1)) > 1e-12) return false;
    if (std::abs(T.entries(t, 2) - 1.0) > 1e-12) return false;
  }
  return true;
}

BoundReport make_report(const std::string& id, const std::string& variant,
                        const std::string& kind, double lhs, double rhs,
                        const Tolerances& tol) {
  BoundReport rep;
  rep.bound_id = id;
  rep.variant = variant;
  rep.problem_kind = kind;
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.slack = rhs - lhs;
  rep.status = classify(lhs, rhs, tol);
  return rep;
}

// Downgrades the status when any hypothesis failed; lhs/rhs stay reported.
void apply_hypotheses(BoundReport& rep) {
  for (const Hypothesis& h : rep.hypotheses)
    if (!h.pass) {
      rep.status = "hypotheses_unmet";
      return;
    }
}

BoundReport unmet_stub(const std::string& id, const std::string& variant,
                       const std::string& kind, double lhs,
                       const std::string& why) {
  BoundReport rep;
  rep.bound_id = id;
  rep.variant = variant;
  rep.problem_kind = kind;
  rep.lhs = lhs;
  rep.status = "hypotheses_unmet";
  rep.hypotheses.push_back({why, false, ""});
  return rep;
}

void record_com(BoundReport& rep, const CenterOfMass& com) {
  for (int i = 0; i < com.point.size(); ++i)
    rep.terms["p_" + std::to_string(i)] = com.point[i];
  rep.terms["com_defect"] = com.defect;
  rep.terms["com_iterations"] = com.iterations;
}

}  // namespace

std::string classify(double lhs, double rhs, const Tolerances& tol) {
  const double denom = normalizer(lhs, rhs);
  const double slack = rhs - lhs;
  if (std::abs(slack) <= tol.equality_tol * denom) return "equality_within_tol";
  if (slack >= -tol.hold_tol * denom) return "holds";
  return "violated";
}

CenterOfMass center_of_mass(const ImmersedMesh& mesh) {
  const SpaceForm& space = mesh.space();
  const WeightedMeasures wm = weighted_measures(mesh);
  const Vec& w = wm.lumped_vertex;
  if (wm.volume <= 0.0) throw ValidationError("mesh has no weighted volume");

  Vec seed = (mesh.vertices().transpose() * w) / wm.volume;
  Vec p = space.flat() ? seed : space.project_to_model(seed);

  CenterOfMass out;
  const int max_iterations = 200;
  for (int it = 1; it <= max_iterations; ++it) {
    const RadialFrame rad = radial_frame(space, p, mesh.vertices());
    Vec mean_coords = Vec::Zero(space.dim());
    for (int v = 0; v < mesh.num_vertices(); ++v)
      mean_coords += w[v] * radial_profile_over_r(space.delta(), rad.r[v]) *
                     rad.normal_coords.row(v).transpose();
    mean_coords /= wm.volume;

    const double diam = std::max(2.0 * rad.max_radius, mesh.mean_edge_length());
    out.iterations = it;
    out.defect = mean_coords.norm() / std::max(diam, 1e-30);
    if (out.defect < 1e-10) {
      out.point = p;
      out.max_radius = rad.max_radius;
      if (space.delta() > 0.0 &&
          rad.max_radius > kPi / (4.0 * std::sqrt(space.delta())) * (1.0 + 1e-9))
        throw DomainError(
            "center of mass: mesh is not contained in a ball of radius "
            "pi/(4 sqrt(delta)) around the fixed point");
      return out;
    }
    p = space.exp_map(p, rad.basis * mean_coords);
  }
  throw SolveError("center of mass iteration did not converge after 200 steps");
}

double enclosing_radius(const ImmersedMesh& mesh, const Vec& p) {
  double radius = 0.0;
  for (int v = 0; v < mesh.num_vertices(); ++v)
    radius = std::max(radius,
                      mesh.space().geodesic_distance(p, mesh.vertex(v)));
  return radius;
}

std::vector<BoundReport> evaluate_closed_bounds(const ClosedInputs& in) {
  const ImmersedMesh& mesh = *in.mesh;
  if (!mesh.closed())
    throw DomainError("closed-case bounds require a closed mesh");
  const SpaceForm& space = mesh.space();
  const double delta = space.delta();
  const Tolerances& tol = in.tol;
  const double lambda1 = in.spectrum->eigenvalue_1;
  const double volume = in.measures->volume;
  const CurvatureField& field = *in.field;

  const bool unweighted = density_is_zero(mesh);
  const bool t_identity = tensor_is_identity(*in.T);
  const bool s_identity = tensor_is_identity(*in.S);
  const double min_t = min_tensor_eigenvalue(*in.T);
  const double min_s = min_tensor_eigenvalue(*in.S);
  const Vec mean_norm = row_norms(space, field.mean_vector);
  const Vec mean_norm2 = mean_norm.array().square();

  std::vector<BoundReport> reports;

  // Baseline hypersurface bound: lambda_1 <= (n/V) * integral of H^2.
  {
    BoundReport rep;
    double rhs = 0.0;
    if (field.hypersurface)
      rhs = 2.0 / volume *
            integrate_scalar(mesh, field.h1.array().square().matrix());
    rep = make_report("REILLY_1_1", "", "closed", lambda1, rhs, tol);
    rep.hypotheses = {{"hypersurface", field.hypersurface, ""},
                      {"delta == 0", delta == 0.0, ""},
                      {"T == identity", t_identity, ""},
                      {"density == 0", unweighted, ""}};
    rep.terms["volume"] = volume;
    apply_hypotheses(rep);
    reports.push_back(rep);
  }

  // Higher-order variant: lambda_1 (int H_{r-1})^2 <= n V int H_r^2 for
  // r in {1, 2}; r = 1 reduces exactly to the baseline bound.
  for (int r = 1; r <= 2; ++r) {
    double lhs = 0.0, rhs = 0.0;
    if (field.hypersurface) {
      const Vec h_prev = (r == 1) ? Vec::Ones(mesh.num_vertices()).eval()
                                  : field.h1;
      const Vec& h_cur = (r == 1) ? field.h1 : field.h2;
      const double int_prev = integrate_scalar(mesh, h_prev);
      lhs = lambda1 * int_prev * int_prev;
      rhs = 2.0 * volume *
            integrate_scalar(mesh, h_cur.array().square().matrix());
    } else {
      lhs = lambda1;
    }
    BoundReport rep = make_report("REILLY_1_2", "r=" + std::to_string(r),
                                  "closed", lhs, rhs, tol);
    rep.hypotheses = {{"hypersurface", field.hypersurface, ""},
                      {"delta == 0", delta == 0.0, ""},
                      {"T == identity", t_identity, ""},
                      {"density == 0", unweighted, ""}};
    apply_hypotheses(rep);
    reports.push_back(rep);
  }

  // Any-codimension flat bound with the mean curvature vector.
  {
    const double rhs = 2.0 / volume * integrate_scalar(mesh, mean_norm2);
    BoundReport rep = make_report("REILLY_1_3", "", "closed", lambda1, rhs, tol);
    rep.hypotheses = {{"delta == 0", delta == 0.0, ""},
                      {"T == identity", t_identity, ""},
                      {"density == 0", unweighted, ""}};
    apply_hypotheses(rep);
    reports.push_back(rep);
  }

  // Spherical ambient (delta = 1): the +1 correction.
  {
    const double rhs =
        2.0 / volume *
        integrate_scalar(mesh, (mean_norm2.array() + 1.0).matrix());
    BoundReport rep =
        make_report("REILLY_SPHERE_1_4", "", "closed", lambda1, rhs, tol);
    rep.hypotheses = {{"delta == 1", delta == 1.0, ""},
                      {"T == identity", t_identity, ""},
                      {"density == 0", unweighted, ""}};
    apply_hypotheses(rep);
    reports.push_back(rep);
  }

  // Hyperbolic ambient (delta = -1): the -1 correction.
  {
    const double rhs =
        2.0 / volume *
        integrate_scalar(mesh, (mean_norm2.array() - 1.0).matrix());
    BoundReport rep =
        make_report("REILLY_HYP_1_5", "", "closed", lambda1, rhs, tol);
    rep.hypotheses = {{"delta == -1", delta == -1.0, ""},
                      {"T == identity", t_identity, ""},
                      {"density == 0", unweighted, ""}};
    apply_hypotheses(rep);
    reports.push_back(rep);
  }

  // Curvature-pinched ambient: lambda_1 <= n (sup ||H||^2 + delta).
  {
    const double rhs = 2.0 * (mean_norm2.maxCoeff() + delta);
    BoundReport rep =
        make_report("HEINTZE_1_6", "", "closed", lambda1, rhs, tol);
    rep.hypotheses = {{"T == identity", t_identity, ""},
                      {"density == 0", unweighted, ""}};
    rep.terms["sup_mean_vector_sq"] = mean_norm2.maxCoeff();
    apply_hypotheses(rep);
    reports.push_back(rep);
  }

  // Weighted/tensor flat bound:
  // lambda_1 (int tr S)^2 <= (int tr T) * int (||H_S||^2 + ||S grad f||^2).
  {
    const double int_tr_s = integrate_scalar(mesh, in.drift_S->trace);
    const double int_tr_t = integrate_scalar(mesh, in.drift_T->trace);
    const Vec hs_norm2 =
        row_norms(space, in.drift_S->h_t).array().square().matrix();
    const Vec sgf_norm2 =
        row_norms(space, in.drift_S->t_grad_f).array().square().matrix();
    const double rhs = int_tr_t * integrate_scalar(mesh, hs_norm2 + sgf_norm2);
    const double lhs = lambda1 * int_tr_s * int_tr_s;
    BoundReport rep = make_report("GENERAL_1_7", "", "closed", lhs, rhs, tol);
    rep.hypotheses = {{"delta == 0", delta == 0.0, ""},
                      {"T positive definite", min_t > 0.0, ""},
                      {"S positive definite", min_s > 0.0, ""}};
    rep.terms["int_tr_S"] = int_tr_s;
    rep.terms["int_tr_T"] = int_tr_t;
    apply_hypotheses(rep);
    reports.push_back(rep);
  }

  // First main estimate, nonpositive curvature: vertexwise sup of the
  // bracket, with the trace ratio computed both ways.
  {
    const Vec& tr_t = in.drift_T->trace;
    const Vec& tr_s = in.drift_S->trace;
    const Vec& dn_t = in.drift_T->norm;
    const Vec& dn_s = in.drift_S->norm;
    const double ratio_tr_s = (dn_t.array() / tr_s.array()).maxCoeff();
    const double ratio_tr_t = (dn_t.array() / tr_t.array()).maxCoeff();
    const double rhs =
        (delta * tr_t.array() + ratio_tr_s * dn_s.array()).maxCoeff();
    const double rhs_tr_t =
        (delta * tr_t.array() + ratio_tr_t * dn_s.array()).maxCoeff();
    BoundReport rep =
        make_report("THM1_CASE1", "", "closed", lambda1, rhs, tol);
    rep.hypotheses = {{"delta <= 0", delta <= 0.0, ""},
                      {"T positive definite", min_t > 0.0, ""},
                      {"S positive definite", min_s > 0.0, ""}};
    rep.terms["ratio_sup_over_tr_S"] = ratio_tr_s;
    rep.terms["ratio_sup_over_tr_T"] = ratio_tr_t;
    rep.terms["rhs_tr_T_variant"] = rhs_tr_t;
    apply_hypotheses(rep);
    reports.push_back(rep);
  }

  // First main estimate, positive curvature: mean-value form inside the
  // quarter-injectivity ball around the center of mass.
  if (delta > 0.0) {
    BoundReport rep;
    try {
      const CenterOfMass com = center_of_mass(mesh);
      const double ball = kPi / (4.0 * std::sqrt(delta));
      const double int_tr_t = integrate_scalar(mesh, in.drift_T->trace);
      const double inf_tr_s = in.drift_S->trace.minCoeff();
      const double int_dn_s2 =
          integrate_scalar(mesh, in.drift_S->norm.array().square().matrix());
      const double rhs =
          int_tr_t / volume *
          (delta + int_dn_s2 / (volume * inf_tr_s * inf_tr_s));
      rep = make_report("THM1_CASE2", "", "closed", lambda1, rhs, tol);
      rep.hypotheses = {
          {"delta > 0", true, ""},
          {"mesh inside ball of radius pi/(4 sqrt(delta))",
           com.max_radius <= ball * (1.0 + 1e-9), ""},
          {"T positive definite", min_t > 0.0, ""},
          {"S positive definite", min_s > 0.0, ""}};
      rep.terms["R"] = com.max_radius;
      rep.terms["ball_radius"] = ball;
      rep.terms["int_tr_T"] = int_tr_t;
      rep.terms["inf_tr_S"] = inf_tr_s;
      record_com(rep, com);
      apply_hypotheses(rep);
    } catch (const Error& e) {
      rep = unmet_stub("THM1_CASE2", "", "closed", lambda1,
                       std::string("center of mass: ") + e.what());
    }
    reports.push_back(rep);
  } else {
    reports.push_back(
        unmet_stub("THM1_CASE2", "", "closed", lambda1, "requires delta > 0"));
  }

  return reports;
}

std::vector<BoundReport> evaluate_steklov_bounds(const BoundaryInputs& in) {
  const ImmersedMesh& omega = *in.omega;
  const ImmersedMesh& curve = *in.curve;
  if (omega.closed())
    throw DomainError("boundary-case bounds require a mesh with boundary");
  const SpaceForm& space = omega.space();
  const double delta = space.delta();
  const Tolerances& tol = in.tol;
  const double sigma1 = in.steklov->eigenvalue_1;
  const double vol_omega = in.measures->volume;
  const double vol_curve = in.curve_measures->volume;

  const double min_t = min_tensor_eigenvalue(*in.T);
  const double min_s_curve = in.s_curve->minCoeff();
  const Vec& tr_t = in.drift_T->trace;
  const Vec& dn_t = in.drift_T->norm;
  const Vec& dn_s = in.drift_S->norm;

  std::vector<BoundReport> reports;

  // Nonpositive curvature: product of the drift bracket over the domain,
  // the boundary curvature factor, the volume ratio, and s_delta(R)^2.
  {
    BoundReport rep;
    try {
      const CenterOfMass com = center_of_mass(curve);
      const double radius = enclosing_radius(omega, com.point);
      const double s_r = radial_profile(delta, radius).s;
      const double ratio_t = (dn_t.array() / tr_t.array()).maxCoeff();
      const double factor_domain =
          (delta * tr_t.array() + ratio_t * dn_t.array()).maxCoeff();
      const double factor_boundary =
          delta + dn_s.maxCoeff() * dn_s.maxCoeff() / (min_s_curve * min_s_curve);
      const double factor_volume = vol_omega / vol_curve * s_r * s_r;
      const double rhs = factor_domain * factor_boundary * factor_volume;
      rep = make_report("THM2_CASE1", "", "steklov", sigma1, rhs, tol);
      rep.hypotheses = {{"delta <= 0", delta <= 0.0, ""},
                        {"T positive definite", min_t > 0.0, ""},
                        {"S positive on boundary", min_s_curve > 0.0, ""}};
      rep.terms["R"] = radius;
      rep.terms["s_delta_R"] = s_r;
      rep.terms["factor_domain"] = factor_domain;
      rep.terms["factor_boundary"] = factor_boundary;
      rep.terms["volume_omega"] = vol_omega;
      rep.terms["volume_boundary"] = vol_curve;
      record_com(rep, com);
      apply_hypotheses(rep);
      if (rep.status == "violated") rep.finding = true;
    } catch (const Error& e) {
      rep = unmet_stub("THM2_CASE1", "", "steklov", sigma1,
                       std::string("center of mass: ") + e.what());
    }
    reports.push_back(rep);
  }

  // Positive curvature: mean-value form inside the quarter ball.
  if (delta > 0.0) {
    BoundReport rep;
    try {
      const CenterOfMass com = center_of_mass(curve);
      const double radius = enclosing_radius(omega, com.point);
      const double ball = kPi / (4.0 * std::sqrt(delta));
      const double int_tr_t = integrate_scalar(omega, tr_t);
      const double int_dn_s2 =
          integrate_scalar(curve, dn_s.array().square().matrix());
      const double rhs =
          int_tr_t / vol_curve *
          (delta + int_dn_s2 / (vol_curve * min_s_curve * min_s_curve));
      rep = make_report("THM2_CASE2", "", "steklov", sigma1, rhs, tol);
      rep.hypotheses = {
          {"delta > 0", true, ""},
          {"domain inside ball of radius pi/(4 sqrt(delta))",
           radius <= ball * (1.0 + 1e-9), ""},
          {"T positive definite", min_t > 0.0, ""},
          {"S positive on boundary", min_s_curve > 0.0, ""}};
      rep.terms["R"] = radius;
      rep.terms["ball_radius"] = ball;
      rep.terms["int_tr_T"] = int_tr_t;
      record_com(rep, com);
      apply_hypotheses(rep);
    } catch (const Error& e) {
      rep = unmet_stub("THM2_CASE2", "", "steklov", sigma1,
                       std::string("center of mass: ") + e.what());
    }
    reports.push_back(rep);
  } else {
    reports.push_back(
        unmet_stub("THM2_CASE2", "", "steklov", sigma1, "requires delta > 0"));
  }

  return reports;
}

BoundReport evaluate_wentzell_bound(const BoundaryInputs& in, double b,
                                    const SpectralResult& spectrum) {
  if (b <= 0.0)
    throw ConfigError("the boundary-diffusion bound requires b > 0");
  const ImmersedMesh& omega = *in.omega;
  const ImmersedMesh& curve = *in.curve;
  if (omega.closed())
    throw DomainError("boundary-case bounds require a mesh with boundary");
  const SpaceForm& space = omega.space();
  const double delta = space.delta();
  const double alpha1 = spectrum.eigenvalue_1;
  const double vol_omega = in.measures->volume;
  const double vol_curve = in.curve_measures->volume;
  const std::string variant = "b=" + std::to_string(b);

  const bool unweighted = density_is_zero(omega);
  const bool t_identity = tensor_is_identity(*in.T);
  const double min_s_curve = in.s_curve->minCoeff();
  const Vec hs_norm = row_norms(space, in.drift_S->h_s);
  const double vratio = vol_omega / vol_curve;

  if (delta <= 0.0) {
    BoundReport rep;
    try {
      const CenterOfMass com = center_of_mass(omega);
      const double radius = enclosing_radius(omega, com.point);
      const double s_r = radial_profile(delta, radius).s;
      const double bracket =
          2.0 * vratio + b - delta * s_r * s_r * (vratio + b);
      const double factor =
          delta + hs_norm.maxCoeff() * hs_norm.maxCoeff() /
                      (min_s_curve * min_s_curve);
      rep = make_report("THM3_CASE1", variant, "wentzell", alpha1,
                        bracket * factor, in.tol);
      rep.hypotheses = {{"delta <= 0", true, ""},
                        {"density == 0", unweighted, ""},
                        {"T == identity", t_identity, ""},
                        {"S positive on boundary", min_s_curve > 0.0, ""}};
      rep.terms["R"] = radius;
      rep.terms["s_delta_R"] = s_r;
      rep.terms["bracket"] = bracket;
      rep.terms["curvature_factor"] = factor;
      rep.terms["b"] = b;
      record_com(rep, com);
      apply_hypotheses(rep);
    } catch (const Error& e) {
      rep = unmet_stub("THM3_CASE1", variant, "wentzell", alpha1,
                       std::string("center of mass: ") + e.what());
      rep.terms["b"] = b;
    }
    return rep;
  }

  const double int_hs2 =
      integrate_scalar(curve, hs_norm.array().square().matrix());
  const double rhs =
      (2.0 * vratio + b) *
      (delta + int_hs2 / (vol_curve * min_s_curve * min_s_curve));
  BoundReport rep =
      make_report("THM3_CASE2", variant, "wentzell", alpha1, rhs, in.tol);
  rep.hypotheses = {{"delta > 0", true, ""},
                    {"density == 0", unweighted, ""},
                    {"T == identity", t_identity, ""},
                    {"S positive on boundary", min_s_curve > 0.0, ""}};
  rep.terms["b"] = b;
  rep.terms["int_HS_sq"] = int_hs2;
  apply_hypotheses(rep);
  return rep;
}

}  // namespace rv
