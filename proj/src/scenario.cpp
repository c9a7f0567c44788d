#include "rv/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "rv/errors.hpp"

namespace rv {

namespace {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Config text -> key/value rows

struct KeyValue {
  std::string section;  // "" before the first [section]
  std::string key;
  std::string value;
  int line = 0;
};

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<KeyValue> lex_config(const std::string& text) {
  std::vector<KeyValue> rows;
  std::istringstream in(text);
  std::string line, section;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(ln) + ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) {
        throw ConfigError("line " + std::to_string(ln) + ": empty section name");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(ln) + ": expected 'key = value'");
    }
    KeyValue kv;
    kv.section = section;
    kv.key = trim(line.substr(0, eq));
    kv.value = trim(line.substr(eq + 1));
    kv.line = ln;
    if (kv.key.empty() || kv.value.empty()) {
      throw ConfigError("line " + std::to_string(ln) + ": empty key or value");
    }
    rows.push_back(std::move(kv));
  }
  return rows;
}

[[noreturn]] void bad_value(const KeyValue& kv, const std::string& what) {
  throw ConfigError("line " + std::to_string(kv.line) + ": " + kv.key + " = '" +
                    kv.value + "': " + what);
}

double parse_double(const KeyValue& kv) {
  try {
    size_t pos = 0;
    const double v = std::stod(kv.value, &pos);
    if (pos != kv.value.size()) throw std::invalid_argument(kv.value);
    return v;
  } catch (const std::exception&) {
    bad_value(kv, "expected a number");
  }
}

int parse_int(const KeyValue& kv) {
  try {
    size_t pos = 0;
    const long v = std::stol(kv.value, &pos);
    if (pos != kv.value.size()) throw std::invalid_argument(kv.value);
    return static_cast<int>(v);
  } catch (const std::exception&) {
    bad_value(kv, "expected an integer");
  }
}

unsigned long long parse_seed(const KeyValue& kv) {
  try {
    size_t pos = 0;
    const unsigned long long v = std::stoull(kv.value, &pos);
    if (pos != kv.value.size()) throw std::invalid_argument(kv.value);
    return v;
  } catch (const std::exception&) {
    bad_value(kv, "expected a nonnegative integer");
  }
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

// ---------------------------------------------------------------------------
// Catalogues for fail-fast validation

const std::set<std::string>& shape_kinds() {
  static const std::set<std::string> kinds = {
      "round_sphere",          "ellipsoid", "flat_disk",
      "hemisphere",            "annulus",   "geodesic_sphere_in_S3",
      "geodesic_sphere_in_H3", "spherical_cap_in_S3"};
  return kinds;
}

const std::set<std::string>& bound_ids() {
  static const std::set<std::string> ids = {
      "REILLY_1_1", "REILLY_1_2", "REILLY_1_3", "REILLY_SPHERE_1_4",
      "REILLY_HYP_1_5", "HEINTZE_1_6", "GENERAL_1_7", "THM1_CASE1",
      "THM1_CASE2", "THM2_CASE1", "THM2_CASE2", "THM3_CASE1", "THM3_CASE2"};
  return ids;
}

const std::set<std::string>& identity_ids() {
  static const std::set<std::string> ids = {
      "HM_POINTWISE", "HM_INTEGRAL", "HM_WEIGHTED_X", "LEMSD",
      "LEM31",        "LEM32",       "GROSJEAN_PTWISE", "PROP5"};
  return ids;
}

std::string format_number(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

// ---------------------------------------------------------------------------
// Tensor files: per-triangle rows "t a11 a12 a22" in the chart frame.

Mat parse_tensor_rows(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int ln = 0;
  std::vector<std::array<double, 4>> rows;
  while (std::getline(in, line)) {
    ++ln;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::array<double, 4> row{};
    std::string extra;
    if (!(ls >> row[0] >> row[1] >> row[2] >> row[3]) || (ls >> extra)) {
      throw ConfigError(origin + ": line " + std::to_string(ln) +
                        ": expected 't a11 a12 a22'");
    }
    rows.push_back(row);
  }
  if (rows.empty()) throw ConfigError(origin + ": no tensor rows");
  Mat entries(rows.size(), 4);
  for (size_t i = 0; i < rows.size(); ++i) {
    for (int k = 0; k < 4; ++k) entries(static_cast<int>(i), k) = rows[i][k];
  }
  return entries;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TangentTensorField tensor_from_file(const ImmersedMesh& mesh, const std::string& path) {
  const Mat rows = parse_tensor_rows(read_text_file(path), path);
  TangentTensorField f;
  f.entries = Mat::Zero(mesh.num_triangles(), 3);
  Eigen::VectorXi seen = Eigen::VectorXi::Zero(mesh.num_triangles());
  for (int i = 0; i < rows.rows(); ++i) {
    const double tf = rows(i, 0);
    const int t = static_cast<int>(tf);
    if (tf != t || t < 0 || t >= mesh.num_triangles()) {
      throw ConfigError(path + ": triangle index " + format_number(tf) + " out of range");
    }
    if (seen[t]++) throw ConfigError(path + ": duplicate row for triangle " + std::to_string(t));
    f.entries.row(t) = rows.row(i).tail(3);
  }
  if (seen.minCoeff() == 0) {
    int t = 0;
    while (seen[t]) ++t;
    throw ConfigError(path + ": no row for triangle " + std::to_string(t));
  }
  f.label = "file(" + fs::path(path).filename().string() + ")";
  f.divergence_free = false;
  return f;
}

TangentTensorField make_surface_tensor(const TensorSpec& spec, const ImmersedMesh& mesh,
                                       const CurvatureField& field) {
  if (spec.kind == "identity") return identity_field(mesh);
  if (spec.kind == "scaled") return identity_field(mesh, spec.scale);
  if (spec.kind == "newton") return newton_tensor(mesh, field, spec.r);
  if (spec.kind == "file") return tensor_from_file(mesh, spec.file);
  throw ConfigError("unknown tensor preset '" + spec.kind + "'");
}

BoundaryTensorField make_boundary_tensor(const TensorSpec& spec, const ImmersedMesh& mesh) {
  if (spec.kind == "identity") return boundary_identity_field(mesh);
  if (spec.kind == "scaled") return boundary_identity_field(mesh, spec.scale);
  throw ConfigError(
      "boundary weights support the identity and scaled presets; got '" + spec.kind + "'");
}

// ---------------------------------------------------------------------------
// Provenance strings

std::string density_label(const DensitySpec& d) {
  if (d.kind == "zero") return "zero";
  return d.kind + "(" + format_number(d.coeff) + ")";
}

std::string shape_source(const ShapeSpec& s) {
  std::ostringstream out;
  out << s.kind << "(";
  if (s.kind == "round_sphere" || s.kind == "flat_disk") {
    out << "radius=" << s.radius;
  } else if (s.kind == "ellipsoid") {
    out << "a=" << s.a << ", b=" << s.b << ", c=" << s.c;
  } else if (s.kind == "annulus") {
    out << "r0=" << s.r0 << ", r1=" << s.r1;
  } else if (s.kind == "hemisphere") {
    out << "radius=1";
  } else {
    out << "rho=" << s.rho;
  }
  out << ", refine=" << s.refine;
  if (s.jitter > 0) out << ", jitter=" << s.jitter << ", seed=" << s.seed;
  out << ")";
  return out.str();
}

std::string iso8601_utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const fs::path& path, const std::string& content,
                std::vector<std::string>& written) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write output file: " + path.string());
  out << content;
  written.push_back(path.string());
}

template <typename Reports>
void apply_filter(Reports& reports, const std::vector<std::string>& keep,
                  std::string Reports::value_type::*id) {
  if (keep.empty()) return;
  const std::set<std::string> wanted(keep.begin(), keep.end());
  std::erase_if(reports, [&](const auto& r) { return !wanted.count(r.*id); });
}

}  // namespace

// ---------------------------------------------------------------------------

std::string TensorSpec::label() const {
  if (kind == "identity") return "identity";
  if (kind == "scaled") return "identity*" + format_number(scale);
  if (kind == "newton") return "newton(" + std::to_string(r) + ")";
  return "file(" + fs::path(file).filename().string() + ")";
}

ScenarioConfig parse_scenario(const std::string& text, const std::string& fallback_id) {
  ScenarioConfig cfg;
  bool has_shape = false, has_file = false, wentzell_requested = false;
  std::set<std::string> seen;  // "section.key" duplicates are errors

  for (const KeyValue& kv : lex_config(text)) {
    if (!seen.insert(kv.section + "." + kv.key).second) {
      throw ConfigError("line " + std::to_string(kv.line) + ": duplicate key '" +
                        kv.key + "'");
    }
    if (kv.section.empty()) {
      if (kv.key == "id") {
        cfg.id = kv.value;
      } else {
        bad_value(kv, "unknown top-level key (only 'id' is allowed before a section)");
      }
    } else if (kv.section == "mesh") {
      if (kv.key == "shape") {
        if (!shape_kinds().count(kv.value)) bad_value(kv, "unknown shape");
        cfg.shape.kind = kv.value;
        has_shape = true;
      } else if (kv.key == "file") {
        cfg.mesh_file = kv.value;
        has_file = true;
      } else if (kv.key == "radius") {
        cfg.shape.radius = parse_double(kv);
      } else if (kv.key == "a") {
        cfg.shape.a = parse_double(kv);
      } else if (kv.key == "b") {
        cfg.shape.b = parse_double(kv);
      } else if (kv.key == "c") {
        cfg.shape.c = parse_double(kv);
      } else if (kv.key == "rho") {
        cfg.shape.rho = parse_double(kv);
      } else if (kv.key == "r0") {
        cfg.shape.r0 = parse_double(kv);
      } else if (kv.key == "r1") {
        cfg.shape.r1 = parse_double(kv);
      } else if (kv.key == "refine") {
        cfg.shape.refine = parse_int(kv);
        if (cfg.shape.refine < 0 || cfg.shape.refine > 8) {
          bad_value(kv, "refinement must be in [0, 8]");
        }
      } else if (kv.key == "density") {
        if (kv.value != "zero" && kv.value != "linear" && kv.value != "quadratic") {
          bad_value(kv, "expected zero, linear, or quadratic");
        }
        cfg.shape.density.kind = kv.value;
        cfg.density_override = true;
      } else if (kv.key == "density_coeff") {
        cfg.shape.density.coeff = parse_double(kv);
      } else if (kv.key == "jitter") {
        cfg.shape.jitter = parse_double(kv);
        if (cfg.shape.jitter < 0) bad_value(kv, "jitter must be nonnegative");
      } else if (kv.key == "seed") {
        cfg.shape.seed = parse_seed(kv);
      } else {
        bad_value(kv, "unknown [mesh] key");
      }
    } else if (kv.section == "tensors") {
      TensorSpec* spec = nullptr;
      std::string sub;
      if (kv.key == "T" || kv.key.rfind("T_", 0) == 0) {
        spec = &cfg.T;
        sub = kv.key == "T" ? "" : kv.key.substr(2);
      } else if (kv.key == "S" || kv.key.rfind("S_", 0) == 0) {
        spec = &cfg.S;
        sub = kv.key == "S" ? "" : kv.key.substr(2);
      } else {
        bad_value(kv, "unknown [tensors] key");
      }
      if (sub.empty()) {
        if (kv.value != "identity" && kv.value != "scaled" && kv.value != "newton" &&
            kv.value != "file") {
          bad_value(kv, "expected identity, scaled, newton, or file");
        }
        spec->kind = kv.value;
      } else if (sub == "scale") {
        spec->scale = parse_double(kv);
        if (spec->scale <= 0) bad_value(kv, "scale must be positive");
      } else if (sub == "r") {
        spec->r = parse_int(kv);
        if (spec->r < 0 || spec->r > 1) bad_value(kv, "Newton order must be 0 or 1");
      } else if (sub == "file") {
        spec->file = kv.value;
      } else {
        bad_value(kv, "unknown [tensors] key");
      }
    } else if (kv.section == "problems") {
      if (kv.key == "run") {
        for (const std::string& p : split_list(kv.value)) {
          if (p == "closed") {
            cfg.run_closed = true;
          } else if (p == "steklov") {
            cfg.run_steklov = true;
          } else if (p == "wentzell") {
            wentzell_requested = true;
          } else {
            bad_value(kv, "expected a subset of closed, steklov, wentzell");
          }
        }
      } else if (kv.key == "wentzell_b") {
        cfg.wentzell_b.clear();
        for (const std::string& b : split_list(kv.value)) {
          KeyValue item = kv;
          item.value = b;
          const double v = parse_double(item);
          if (v < 0) bad_value(kv, "boundary-diffusion weights must be nonnegative");
          cfg.wentzell_b.push_back(v);
        }
        if (cfg.wentzell_b.empty()) bad_value(kv, "expected at least one value");
      } else {
        bad_value(kv, "unknown [problems] key");
      }
    } else if (kv.section == "checks") {
      std::vector<std::string>* filter = nullptr;
      const std::set<std::string>* known = nullptr;
      if (kv.key == "bounds") {
        filter = &cfg.bound_filter;
        known = &bound_ids();
      } else if (kv.key == "identities") {
        filter = &cfg.identity_filter;
        known = &identity_ids();
      } else {
        bad_value(kv, "unknown [checks] key");
      }
      if (kv.value != "all") {
        for (const std::string& id : split_list(kv.value)) {
          if (!known->count(id)) {
            throw ConfigError("line " + std::to_string(kv.line) + ": unknown check id '" +
                              id + "'");
          }
          filter->push_back(id);
        }
      }
    } else if (kv.section == "tolerances") {
      const double v = parse_double(kv);
      if (v <= 0) bad_value(kv, "tolerances must be positive");
      if (kv.key == "equality_tol") {
        cfg.tol.equality_tol = v;
      } else if (kv.key == "hold_tol") {
        cfg.tol.hold_tol = v;
      } else if (kv.key == "identity_tol") {
        cfg.tol.identity_tol = v;
      } else {
        bad_value(kv, "unknown [tolerances] key");
      }
    } else {
      throw ConfigError("line " + std::to_string(kv.line) + ": unknown section [" +
                        kv.section + "]");
    }
  }

  if (cfg.id.empty()) cfg.id = fallback_id;
  if (cfg.id.empty()) throw ConfigError("scenario has no id");
  for (char c : cfg.id) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') {
      throw ConfigError("scenario id '" + cfg.id +
                        "' may only contain letters, digits, '_', and '-'");
    }
  }
  if (has_shape == has_file) {
    throw ConfigError("[mesh] needs exactly one of 'shape' or 'file'");
  }
  if (wentzell_requested && cfg.wentzell_b.empty()) {
    throw ConfigError("run includes wentzell but [problems] wentzell_b is missing");
  }
  if (!wentzell_requested && !cfg.wentzell_b.empty()) {
    throw ConfigError("wentzell_b given but run does not include wentzell");
  }
  if (!cfg.run_closed && !cfg.run_steklov && !wentzell_requested) {
    throw ConfigError("[problems] run must request at least one problem");
  }
  if (cfg.run_closed && (cfg.run_steklov || wentzell_requested)) {
    throw ConfigError(
        "the closed problem cannot be combined with boundary problems in one scenario");
  }
  if (cfg.T.kind == "file" && cfg.T.file.empty()) {
    throw ConfigError("tensor preset 'file' needs a T_file path");
  }
  if (cfg.S.kind == "file" && cfg.S.file.empty()) {
    throw ConfigError("tensor preset 'file' needs an S_file path");
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  const fs::path p(path);
  if (!fs::exists(p)) throw ConfigError("config file not found: " + path);
  ScenarioConfig cfg = parse_scenario(read_text_file(path), p.stem().string());

  // Referenced files are resolved relative to the config file and must
  // exist and parse before any solve begins.
  const fs::path base = p.has_parent_path() ? p.parent_path() : fs::path(".");
  auto resolve = [&](std::string& file) {
    if (file.empty()) return;
    const fs::path fp(file);
    file = fp.is_absolute() ? fp.string() : (base / fp).string();
    if (!fs::exists(file)) throw ConfigError("referenced file not found: " + file);
  };
  resolve(cfg.mesh_file);
  resolve(cfg.T.file);
  resolve(cfg.S.file);
  if (!cfg.mesh_file.empty()) parse_mesh(read_text_file(cfg.mesh_file));
  if (!cfg.T.file.empty()) parse_tensor_rows(read_text_file(cfg.T.file), cfg.T.file);
  if (!cfg.S.file.empty()) parse_tensor_rows(read_text_file(cfg.S.file), cfg.S.file);
  return cfg;
}

// ---------------------------------------------------------------------------

ScenarioOutcome run_scenario(const ScenarioConfig& cfg) {
  ScenarioOutcome out;
  out.config = cfg;
  ScenarioReport& rep = out.report;
  rep.scenario = cfg.id;
  rep.tol = cfg.tol;

  // --- mesh ---------------------------------------------------------------
  std::optional<ImmersedMesh> mesh_slot;
  if (cfg.mesh_file.empty()) {
    mesh_slot.emplace(generate_shape(cfg.shape));
    rep.mesh.shape = cfg.shape.kind;
    rep.mesh.source = shape_source(cfg.shape);
    rep.mesh.refine = cfg.shape.refine;
    rep.mesh.density = density_label(cfg.shape.density);
    rep.mesh.jitter = cfg.shape.jitter;
    rep.mesh.seed = cfg.shape.seed;
  } else {
    ImmersedMesh parsed = parse_mesh(read_text_file(cfg.mesh_file));
    if (cfg.density_override) {
      Vec f = evaluate_density(cfg.shape.density, parsed.vertices());
      parsed = ImmersedMesh::surface(parsed.space(), parsed.vertices(),
                                     parsed.triangles(), std::move(f));
      rep.mesh.density = density_label(cfg.shape.density);
    } else {
      rep.mesh.density = parsed.density().cwiseAbs().maxCoeff() > 0 ? "from-file" : "zero";
    }
    mesh_slot = std::move(parsed);
    rep.mesh.shape = "file";
    rep.mesh.source = cfg.mesh_file;
  }
  const ImmersedMesh& mesh = *mesh_slot;
  const bool run_wentzell = !cfg.wentzell_b.empty();
  if (cfg.run_closed && !mesh.closed()) {
    throw ConfigError("scenario " + cfg.id + ": the closed problem needs a closed mesh");
  }
  if ((cfg.run_steklov || run_wentzell) && mesh.closed()) {
    throw ConfigError("scenario " + cfg.id + ": boundary problems need a mesh with boundary");
  }

  rep.mesh.delta = mesh.space().delta();
  rep.mesh.vertices = mesh.num_vertices();
  rep.mesh.triangles = mesh.num_triangles();
  rep.tensor_T = cfg.T.label();
  rep.tensor_S = cfg.S.label();
  for (const std::string& w : mesh.warnings()) rep.warnings.push_back(w);

  const WeightedMeasures wm = weighted_measures(mesh);
  rep.mesh.mean_edge_length = mesh.mean_edge_length();
  rep.mesh.volume = wm.volume;
  rep.mesh.boundary_volume = wm.boundary_volume;

  const CurvatureField field = second_fundamental_form(mesh);
  const TangentTensorField T = make_surface_tensor(cfg.T, mesh, field);
  if (min_tensor_eigenvalue(T) <= 0) {
    throw ConfigError("scenario " + cfg.id + ": tensor T (" + T.label +
                      ") is not positive definite on this mesh");
  }
  const DriftField drift_T = drift_term(mesh, field, T);

  auto spectrum_entry = [&rep](const std::string& problem, const SpectralResult& r) {
    SpectrumEntry e;
    e.problem = problem;
    e.eigenvalue = r.eigenvalue_1;
    e.residual = r.residual;
    e.deflation = r.deflation_report;
    e.next = r.next_eigenvalues;
    rep.spectra.push_back(std::move(e));
  };

  if (cfg.run_closed) {
    const TangentTensorField S = make_surface_tensor(cfg.S, mesh, field);
    const DriftField drift_S = drift_term(mesh, field, S);
    out.system = assemble_system(mesh, T);
    const SpectralResult spectrum = solve_closed(mesh, out.system);
    spectrum_entry("closed", spectrum);

    ClosedInputs in;
    in.mesh = &mesh;
    in.measures = &wm;
    in.field = &field;
    in.T = &T;
    in.S = &S;
    in.drift_T = &drift_T;
    in.drift_S = &drift_S;
    in.spectrum = &spectrum;
    in.tol = cfg.tol;
    rep.bounds = evaluate_closed_bounds(in);
    rep.identities = evaluate_identities(in);
  } else {
    const ImmersedMesh curve = boundary_complex(mesh);
    rep.mesh.boundary_loops = curve.loop_count();
    const WeightedMeasures curve_wm = weighted_measures(curve);
    const BoundaryTensorField S = make_boundary_tensor(cfg.S, mesh);
    const Vec s_full = boundary_vertex_scalars(mesh, S);
    Vec s_curve(curve.num_vertices());
    for (int v = 0; v < curve.num_vertices(); ++v) {
      s_curve[v] = s_full[curve.parent_vertex()[v]];
    }
    const CurveDrift drift_S = curve_drift_term(curve, s_curve);
    out.system = assemble_system(mesh, T, &S);
    out.boundary_system = true;

    BoundaryInputs in;
    in.omega = &mesh;
    in.curve = &curve;
    in.measures = &wm;
    in.curve_measures = &curve_wm;
    in.field = &field;
    in.T = &T;
    in.drift_T = &drift_T;
    in.s_curve = &s_curve;
    in.drift_S = &drift_S;
    in.tol = cfg.tol;

    SpectralResult steklov;
    if (cfg.run_steklov) {
      steklov = solve_steklov(mesh, out.system);
      spectrum_entry("steklov", steklov);
      in.steklov = &steklov;
      rep.bounds = evaluate_steklov_bounds(in);
    }
    for (const double b : cfg.wentzell_b) {
      const SpectralResult wentzell = solve_wentzell(mesh, out.system, b);
      spectrum_entry("wentzell b=" + format_number(b), wentzell);
      rep.bounds.push_back(evaluate_wentzell_bound(in, b, wentzell));
    }
    rep.identities = evaluate_identities(in);
  }

  apply_filter(rep.bounds, cfg.bound_filter, &BoundReport::bound_id);
  apply_filter(rep.identities, cfg.identity_filter, &IdentityReport::identity_id);
  return out;
}

std::vector<std::string> write_outputs(const ScenarioOutcome& outcome,
                                       const std::string& out_dir, bool dump_matrices) {
  const fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory: " + out_dir);

  std::vector<std::string> written;
  const std::string& id = outcome.report.scenario;
  write_file(dir / (id + ".report.json"), report_json(outcome.report), written);
  write_file(dir / (id + ".summary.csv"), report_csv(outcome.report), written);
  write_file(dir / (id + ".meta.json"),
             report_sidecar_json(outcome.report, iso8601_utc_now()), written);
  if (dump_matrices) {
    write_file(dir / (id + ".stiffness.coo"), matrix_coo(outcome.system.stiffness), written);
    write_file(dir / (id + ".mass.coo"), matrix_coo(outcome.system.mass), written);
    if (outcome.boundary_system) {
      write_file(dir / (id + ".boundary_mass.coo"),
                 matrix_coo(outcome.system.boundary_mass), written);
      write_file(dir / (id + ".boundary_stiffness.coo"),
                 matrix_coo(outcome.system.boundary_stiffness), written);
    }
  }
  return written;
}

int scenario_exit_code(const ScenarioReport& report) {
  return suite_passes(report) ? 0 : 1;
}

}  // namespace rv
