#include "rv/report.hpp"

#include <json.hpp>

#include <sstream>

namespace rv {

namespace {

using Json = nlohmann::ordered_json;

std::string qualified_id(const BoundReport& b) {
  return b.variant.empty() ? b.bound_id : b.bound_id + "[" + b.variant + "]";
}

const char* model_name(double delta) {
  if (delta == 0.0) return "EUCLIDEAN";
  return delta > 0.0 ? "SPHERE" : "HYPERBOLIC";
}

Json hypotheses_json(const std::vector<Hypothesis>& hs) {
  Json arr = Json::array();
  for (const Hypothesis& h : hs) {
    Json j;
    j["name"] = h.name;
    j["pass"] = h.pass;
    if (!h.note.empty()) j["note"] = h.note;
    arr.push_back(std::move(j));
  }
  return arr;
}

Json bound_json(const BoundReport& b) {
  Json j;
  j["bound_id"] = b.bound_id;
  if (!b.variant.empty()) j["variant"] = b.variant;
  j["problem"] = b.problem_kind;
  j["lhs"] = b.lhs;
  j["rhs"] = b.rhs;
  j["slack"] = b.slack;
  j["status"] = b.status;
  if (b.finding) j["finding"] = true;
  j["hypotheses"] = hypotheses_json(b.hypotheses);
  Json terms = Json::object();  // std::map iterates in key order: deterministic
  for (const auto& [key, value] : b.terms) terms[key] = value;
  j["terms"] = std::move(terms);
  return j;
}

Json identity_json(const IdentityReport& id) {
  Json j;
  j["identity_id"] = id.identity_id;
  j["lhs"] = id.lhs;
  j["rhs"] = id.rhs;
  j["residual"] = id.residual;
  j["status"] = id.status;
  if (!id.locus.empty()) j["locus"] = id.locus;
  if (!id.note.empty()) j["note"] = id.note;
  if (id.finding) j["finding"] = true;
  return j;
}

Json status_histogram(const ScenarioReport& rep) {
  static const char* kStatuses[] = {"holds", "equality_within_tol", "violated",
                                    "hypotheses_unmet"};
  Json j;
  for (const char* s : kStatuses) {
    int bounds = 0, identities = 0;
    for (const BoundReport& b : rep.bounds) bounds += b.status == s;
    for (const IdentityReport& id : rep.identities) identities += id.status == s;
    j[s] = Json{{"bounds", bounds}, {"identities", identities}};
  }
  return j;
}

}  // namespace

std::vector<std::string> finding_ids(const ScenarioReport& rep) {
  std::vector<std::string> ids;
  for (const BoundReport& b : rep.bounds) {
    if (b.finding && b.status == "violated") ids.push_back(qualified_id(b));
  }
  for (const IdentityReport& id : rep.identities) {
    if (id.finding && id.status == "violated") ids.push_back(id.identity_id);
  }
  return ids;
}

bool suite_passes(const ScenarioReport& rep) {
  for (const BoundReport& b : rep.bounds) {
    if (b.status == "violated" && !b.finding) return false;
  }
  for (const IdentityReport& id : rep.identities) {
    if (id.status == "violated" && !id.finding) return false;
  }
  return true;
}

std::string report_json(const ScenarioReport& rep) {
  Json j;
  j["schema"] = "reilly-verify/report/1";
  j["scenario"] = rep.scenario;

  Json mesh;
  mesh["shape"] = rep.mesh.shape;
  mesh["source"] = rep.mesh.source;
  mesh["model"] = model_name(rep.mesh.delta);
  mesh["delta"] = rep.mesh.delta;
  mesh["refine"] = rep.mesh.refine;
  mesh["vertices"] = rep.mesh.vertices;
  mesh["triangles"] = rep.mesh.triangles;
  mesh["boundary_loops"] = rep.mesh.boundary_loops;
  mesh["mean_edge_length"] = rep.mesh.mean_edge_length;
  mesh["volume"] = rep.mesh.volume;
  mesh["boundary_volume"] = rep.mesh.boundary_volume;
  mesh["density"] = rep.mesh.density;
  mesh["jitter"] = rep.mesh.jitter;
  mesh["seed"] = rep.mesh.seed;
  j["mesh"] = std::move(mesh);

  j["tensors"] = Json{{"T", rep.tensor_T}, {"S", rep.tensor_S}};
  j["tolerances"] = Json{{"equality_tol", rep.tol.equality_tol},
                         {"hold_tol", rep.tol.hold_tol},
                         {"identity_tol", rep.tol.identity_tol}};

  Json conv;
  conv["sup_inf"] = "sup/inf over the surface are max/min over vertex values";
  conv["slack"] =
      "slack = rhs - lhs; statuses compare slack normalized by max(|lhs|, |rhs|, 1e-30)";
  conv["mean_curvature"] =
      "mean_vector = (b11 + b22)/2; H_T contracts T against the full second "
      "fundamental form, so H_Id has norm 2*|mean_vector| on a surface";
  conv["boundary_tensor"] =
      "on the 1-dimensional boundary S is a positive scalar; H_S = S * "
      "(geodesic curvature vector)";
  conv["trace_variants"] =
      "the first product estimate reports the literal tr(S) denominator and "
      "the tr(T) substitution side by side (terms: rhs_tr_T_variant)";
  conv["boundary_center"] =
      "the boundary-diffusion estimate centers its enclosing ball at the "
      "center of mass of the domain";
  conv["wentzell_sign"] =
      "boundary-diffusion spectra are nonnegative: alpha_k = b k^2 + k on "
      "the unit disk";
  j["conventions"] = std::move(conv);

  Json spectra = Json::array();
  for (const SpectrumEntry& s : rep.spectra) {
    Json e;
    e["problem"] = s.problem;
    e["eigenvalue"] = s.eigenvalue;
    e["residual"] = s.residual;
    e["deflation"] = s.deflation;
    e["next"] = s.next;
    spectra.push_back(std::move(e));
  }
  j["spectra"] = std::move(spectra);

  Json bounds = Json::array();
  for (const BoundReport& b : rep.bounds) bounds.push_back(bound_json(b));
  j["bounds"] = std::move(bounds);

  Json identities = Json::array();
  for (const IdentityReport& id : rep.identities) identities.push_back(identity_json(id));
  j["identities"] = std::move(identities);

  j["findings"] = finding_ids(rep);
  j["warnings"] = rep.warnings;

  Json summary;
  summary["statuses"] = status_histogram(rep);
  summary["findings"] = static_cast<int>(finding_ids(rep).size());
  summary["suite_pass"] = suite_passes(rep);
  j["summary"] = std::move(summary);

  return j.dump(2) + "\n";
}

std::string report_csv(const ScenarioReport& rep) {
  std::ostringstream out;
  out.precision(17);
  out << "bound_id,lhs,rhs,slack,status\n";
  for (const BoundReport& b : rep.bounds) {
    out << qualified_id(b) << "," << b.lhs << "," << b.rhs << "," << b.slack << ","
        << b.status << "\n";
  }
  return out.str();
}

std::string report_sidecar_json(const ScenarioReport& rep, const std::string& timestamp) {
  Json j;
  j["scenario"] = rep.scenario;
  j["written_at"] = timestamp;
  return j.dump(2) + "\n";
}

std::string matrix_coo(const Sparse& m) {
  std::ostringstream out;
  out.precision(17);
  for (int k = 0; k < m.outerSize(); ++k) {
    for (Sparse::InnerIterator it(m, k); it; ++it) {
      out << it.row() << " " << it.col() << " " << it.value() << "\n";
    }
  }
  return out.str();
}

}  // namespace rv
