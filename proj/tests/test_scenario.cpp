#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "rv/errors.hpp"
#include "rv/scenario.hpp"

using namespace rv;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Self-cleaning scratch directory for output tests.
struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("rv_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

const char* kClosedConfig = R"(
# exercises every section of the grammar
id = parse_me

[mesh]
shape = round_sphere
radius = 1.0
refine = 2
density = linear
density_coeff = 0.25
jitter = 0.01
seed = 7

[tensors]
T = scaled
T_scale = 2.0
S = newton
S_r = 1

[problems]
run = closed

[checks]
bounds = REILLY_1_1, HEINTZE_1_6
identities = LEMSD

[tolerances]
equality_tol = 0.05
hold_tol = 1e-8
identity_tol = 5e-3
)";

}  // namespace

TEST_CASE("scenario parser reads the documented grammar") {
  const ScenarioConfig cfg = parse_scenario(kClosedConfig, "fallback");
  CHECK(cfg.id == "parse_me");
  CHECK(cfg.shape.kind == "round_sphere");
  CHECK(cfg.shape.refine == 2);
  CHECK(cfg.shape.density.kind == "linear");
  CHECK(cfg.shape.density.coeff == 0.25);
  CHECK(cfg.shape.jitter == 0.01);
  CHECK(cfg.shape.seed == 7);
  CHECK(cfg.T.kind == "scaled");
  CHECK(cfg.T.scale == 2.0);
  CHECK(cfg.T.label() == "identity*2");
  CHECK(cfg.S.kind == "newton");
  CHECK(cfg.S.r == 1);
  CHECK(cfg.run_closed);
  CHECK_FALSE(cfg.run_steklov);
  CHECK(cfg.wentzell_b.empty());
  CHECK(cfg.bound_filter == std::vector<std::string>{"REILLY_1_1", "HEINTZE_1_6"});
  CHECK(cfg.identity_filter == std::vector<std::string>{"LEMSD"});
  CHECK(cfg.tol.equality_tol == 0.05);
  CHECK(cfg.tol.hold_tol == 1e-8);
  CHECK(cfg.tol.identity_tol == 5e-3);

  // The id falls back to the config file stem when absent.
  const ScenarioConfig anon =
      parse_scenario("[mesh]\nshape = flat_disk\n[problems]\nrun = steklov\n", "stem");
  CHECK(anon.id == "stem");
  CHECK(anon.run_steklov);
}

TEST_CASE("scenario parser rejects malformed configs") {
  auto rejects = [](const std::string& text) {
    CHECK_THROWS_AS(parse_scenario(text, "x"), ConfigError);
  };
  rejects("shape = round_sphere\n");                       // key outside a section
  rejects("[mesh]\nshape = torus\n[problems]\nrun = closed\n");  // unknown shape
  rejects("[mesh]\nshape = flat_disk\nwhat = 1\n[problems]\nrun = steklov\n");
  rejects("[mesh]\nshape = flat_disk\n[problems]\nrun = steklov\n[wat]\nx = 1\n");
  rejects("[mesh]\nshape = flat_disk\n");                  // no problems
  rejects("[mesh]\nshape = flat_disk\nrefine = 9\n[problems]\nrun = steklov\n");
  rejects("[mesh]\nshape = flat_disk\nradius = abc\n[problems]\nrun = steklov\n");
  rejects("[mesh]\nshape = flat_disk\nradius = 1\nradius = 2\n[problems]\nrun = steklov\n");
  rejects("[mesh]\nshape = flat_disk\nfile = m.wmesh\n[problems]\nrun = steklov\n");
  rejects("[mesh]\nshape = flat_disk\n[problems]\nrun = wentzell\n");  // missing b list
  rejects("[mesh]\nshape = flat_disk\n[problems]\nrun = steklov\nwentzell_b = 1\n");
  rejects("[mesh]\nshape = flat_disk\n[problems]\nrun = wentzell\nwentzell_b = -1\n");
  rejects("[mesh]\nshape = round_sphere\n[problems]\nrun = closed, steklov\n");
  rejects("[mesh]\nshape = round_sphere\n[problems]\nrun = closed\n[checks]\nbounds = NOPE\n");
  rejects("[mesh]\nshape = round_sphere\n[problems]\nrun = closed\n[tolerances]\nhold_tol = 0\n");
  rejects("[mesh]\nshape = round_sphere\n[problems]\nrun = closed\n[tensors]\nT = file\n");
  rejects("id = bad id!\n[mesh]\nshape = round_sphere\n[problems]\nrun = closed\n");
  CHECK_THROWS_AS(load_scenario("/does/not/exist.cfg"), ConfigError);
}

TEST_CASE("closed scenario produces a complete deterministic report") {
  ScenarioConfig cfg;
  cfg.id = "sphere_small";
  cfg.shape.kind = "round_sphere";
  cfg.shape.refine = 2;
  cfg.run_closed = true;

  const ScenarioOutcome outcome = run_scenario(cfg);
  const ScenarioReport& rep = outcome.report;
  CHECK(rep.scenario == "sphere_small");
  CHECK(rep.mesh.shape == "round_sphere");
  CHECK(rep.mesh.source == "round_sphere(radius=1, refine=2)");
  CHECK(rep.mesh.vertices == 162);
  CHECK(rep.mesh.boundary_loops == 0);
  // Refine 2 leaves the inscribed icosphere ~2% short of the round area.
  CHECK(rep.mesh.volume == doctest::Approx(4 * M_PI).epsilon(0.025));
  CHECK(rep.spectra.size() == 1);
  CHECK(rep.spectra[0].problem == "closed");
  CHECK(rep.spectra[0].eigenvalue == doctest::Approx(2.0).epsilon(0.05));
  CHECK(rep.bounds.size() == 10);
  CHECK(rep.identities.size() == 8);
  CHECK(suite_passes(rep));
  CHECK(scenario_exit_code(rep) == 0);
  CHECK(finding_ids(rep).empty());

  // Pure function of the config: byte-identical serialization on reruns.
  const ScenarioOutcome again = run_scenario(cfg);
  CHECK(report_json(rep) == report_json(again.report));
  CHECK(report_csv(rep) == report_csv(again.report));

  // The JSON document parses back and carries the full schema.
  const auto doc = nlohmann::json::parse(report_json(rep));
  CHECK(doc["schema"] == "reilly-verify/report/1");
  CHECK(doc["mesh"]["model"] == "EUCLIDEAN");
  CHECK(doc["conventions"].contains("sup_inf"));
  CHECK(doc["bounds"].size() == 10);
  CHECK(doc["identities"].size() == 8);
  CHECK(doc["summary"]["suite_pass"] == true);
  CHECK(doc["findings"].empty());

  // CSV: header plus one row per bound report.
  const std::string csv = report_csv(rep);
  CHECK(csv.rfind("bound_id,lhs,rhs,slack,status\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);
  CHECK(csv.find("REILLY_1_2[r=1]") != std::string::npos);
}

TEST_CASE("check filters prune the report lists") {
  ScenarioConfig cfg;
  cfg.id = "filtered";
  cfg.shape.kind = "round_sphere";
  cfg.shape.refine = 1;
  cfg.run_closed = true;
  cfg.bound_filter = {"REILLY_1_1", "HEINTZE_1_6"};
  cfg.identity_filter = {"LEMSD", "GROSJEAN_PTWISE"};

  const ScenarioReport rep = run_scenario(cfg).report;
  REQUIRE(rep.bounds.size() == 2);
  CHECK(rep.bounds[0].bound_id == "REILLY_1_1");
  CHECK(rep.bounds[1].bound_id == "HEINTZE_1_6");
  REQUIRE(rep.identities.size() == 2);
  CHECK(rep.identities[0].identity_id == "LEMSD");
  CHECK(rep.identities[1].identity_id == "GROSJEAN_PTWISE");
}

TEST_CASE("topology and problem kind must agree") {
  ScenarioConfig closed_on_disk;
  closed_on_disk.id = "bad1";
  closed_on_disk.shape.kind = "flat_disk";
  closed_on_disk.shape.refine = 1;
  closed_on_disk.run_closed = true;
  CHECK_THROWS_AS(run_scenario(closed_on_disk), ConfigError);

  ScenarioConfig steklov_on_sphere;
  steklov_on_sphere.id = "bad2";
  steklov_on_sphere.shape.kind = "round_sphere";
  steklov_on_sphere.shape.refine = 1;
  steklov_on_sphere.run_steklov = true;
  CHECK_THROWS_AS(run_scenario(steklov_on_sphere), ConfigError);
}

TEST_CASE("flat-disk scenario reports the finding without failing") {
  ScenarioConfig cfg;
  cfg.id = "disk_small";
  cfg.shape.kind = "flat_disk";
  cfg.shape.refine = 2;
  cfg.run_steklov = true;
  cfg.wentzell_b = {0.5};

  const ScenarioReport rep = run_scenario(cfg).report;
  CHECK(rep.spectra.size() == 2);
  CHECK(rep.spectra[1].problem == "wentzell b=0.5");
  const auto ids = finding_ids(rep);
  REQUIRE(ids.size() == 1);
  CHECK(ids[0] == "THM2_CASE1");
  CHECK(suite_passes(rep));          // findings do not fail the suite
  CHECK(scenario_exit_code(rep) == 0);

  const auto doc = nlohmann::json::parse(report_json(rep));
  CHECK(doc["findings"] == nlohmann::json::array({"THM2_CASE1"}));
  CHECK(doc["summary"]["statuses"]["violated"]["bounds"] == 1);
}

TEST_CASE("scenario outputs land on disk with a volatile sidecar") {
  ScenarioConfig cfg;
  cfg.id = "artifacts";
  cfg.shape.kind = "flat_disk";
  cfg.shape.refine = 1;
  cfg.run_steklov = true;

  const ScenarioOutcome outcome = run_scenario(cfg);
  TempDir dir1, dir2;
  const auto written = write_outputs(outcome, dir1.path.string(), true);
  // report + csv + sidecar + four matrix dumps for a boundary problem
  CHECK(written.size() == 7);
  for (const std::string& p : written) CHECK(fs::exists(p));

  const std::string coo = slurp(dir1.path / "artifacts.stiffness.coo");
  std::istringstream rows(coo);
  int r, c;
  double v;
  int entries = 0;
  while (rows >> r >> c >> v) {
    CHECK(r >= 0);
    CHECK(c >= 0);
    ++entries;
  }
  CHECK(entries > 100);

  write_outputs(outcome, dir2.path.string(), false);
  CHECK(slurp(dir1.path / "artifacts.report.json") ==
        slurp(dir2.path / "artifacts.report.json"));
  CHECK(slurp(dir1.path / "artifacts.summary.csv") ==
        slurp(dir2.path / "artifacts.summary.csv"));
  const auto meta = nlohmann::json::parse(slurp(dir1.path / "artifacts.meta.json"));
  CHECK(meta["scenario"] == "artifacts");
  CHECK(meta.contains("written_at"));
}

TEST_CASE("file meshes and tensor files feed a scenario") {
  TempDir dir;
  // Export a builtin, reload it through the file path of the config.
  ShapeSpec disk;
  disk.kind = "flat_disk";
  disk.refine = 2;
  {
    std::ofstream mesh_out(dir.path / "disk.wmesh", std::ios::binary);
    mesh_out << write_mesh(generate_shape(disk));
  }
  const ImmersedMesh reference = generate_shape(disk);
  {
    std::ofstream tf(dir.path / "identity.tensor", std::ios::binary);
    tf << "# identity in every chart frame\n";
    for (int t = 0; t < reference.num_triangles(); ++t) tf << t << " 1 0 1\n";
  }
  {
    std::ofstream cfg_out(dir.path / "from_file.cfg", std::ios::binary);
    cfg_out << "[mesh]\nfile = disk.wmesh\n[tensors]\nT = file\nT_file = identity.tensor\n"
            << "[problems]\nrun = steklov\n";
  }

  const ScenarioConfig cfg = load_scenario((dir.path / "from_file.cfg").string());
  CHECK(cfg.id == "from_file");
  CHECK(cfg.mesh_file == (dir.path / "disk.wmesh").string());

  const ScenarioReport rep = run_scenario(cfg).report;
  CHECK(rep.mesh.shape == "file");
  CHECK(rep.mesh.vertices == reference.num_vertices());
  CHECK(rep.tensor_T == "file(identity.tensor)");
  CHECK(rep.spectra[0].eigenvalue == doctest::Approx(1.0).epsilon(0.02));
  CHECK(suite_passes(rep));

  // A file tensor that misses a triangle is rejected up front.
  {
    std::ofstream tf(dir.path / "short.tensor", std::ios::binary);
    for (int t = 0; t + 1 < reference.num_triangles(); ++t) tf << t << " 1 0 1\n";
  }
  ScenarioConfig bad = cfg;
  bad.T.file = (dir.path / "short.tensor").string();
  CHECK_THROWS_AS(run_scenario(bad), ConfigError);

  // Missing referenced files fail validation before any solve.
  {
    std::ofstream cfg_out(dir.path / "missing.cfg", std::ios::binary);
    cfg_out << "[mesh]\nfile = nope.wmesh\n[problems]\nrun = steklov\n";
  }
  CHECK_THROWS_AS(load_scenario((dir.path / "missing.cfg").string()), ConfigError);
}
