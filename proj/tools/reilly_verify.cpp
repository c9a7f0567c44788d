// Command-line front end: generate meshes, solve spectra, and run the full
// bound-and-identity suite from scenario configs.
//
// Exit codes: 0 success (including finding-class violations, which are
// documented outcomes), 1 for failed checks or solver errors, 2 for usage,
// config, or input-file errors.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rv/errors.hpp"
#include "rv/scenario.hpp"

namespace fs = std::filesystem;

namespace {

constexpr const char* kSuiteScenarios[] = {
    "sphere_unit", "sphere_f_linear", "sphere_f_quadratic", "sphere_f_linear_T2",
    "ellipsoid",   "sphere_S3",       "sphere_H3",          "disk_steklov",
    "disk_radius2", "hemisphere",     "annulus",            "cap_S3",
};

// REILLY_VERIFY_SEED pins the jitter RNG of every generated mesh.
std::optional<unsigned long long> env_seed() {
  const char* s = std::getenv("REILLY_VERIFY_SEED");
  if (!s || !*s) return std::nullopt;
  try {
    size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (s[pos] != '\0') throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw rv::ConfigError(std::string("REILLY_VERIFY_SEED is not a nonnegative integer: ") + s);
  }
}

void apply_env_seed(rv::ShapeSpec& spec) {
  if (const auto seed = env_seed()) spec.seed = *seed;
}

int run_generate(const rv::ShapeSpec& spec, const std::string& out_path) {
  rv::ShapeSpec s = spec;
  apply_env_seed(s);
  const rv::ImmersedMesh mesh = rv::generate_shape(s);
  const rv::WeightedMeasures wm = rv::weighted_measures(mesh);
  std::cout << s.kind << ": " << mesh.num_vertices() << " vertices, "
            << mesh.num_triangles() << " triangles";
  if (!mesh.closed()) std::cout << ", " << rv::boundary_complex(mesh).loop_count() << " boundary loop(s)";
  std::cout << "\n";
  std::cout << "weighted area " << wm.volume;
  if (!mesh.closed()) std::cout << ", weighted boundary length " << wm.boundary_volume;
  std::cout << "\n";
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw rv::ConfigError("cannot write mesh file: " + out_path);
    out << rv::write_mesh(mesh);
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

rv::ScenarioConfig load_with_overrides(const std::string& path, int refine_override) {
  rv::ScenarioConfig cfg = rv::load_scenario(path);
  if (refine_override >= 0) {
    if (!cfg.mesh_file.empty()) {
      throw rv::ConfigError("--refine cannot override a file-based mesh (" + path + ")");
    }
    cfg.shape.refine = refine_override;
  }
  apply_env_seed(cfg.shape);
  return cfg;
}

int run_spectrum(const std::string& config_path, int refine_override,
                 const std::string& out_dir, bool dump_matrices) {
  const rv::ScenarioConfig cfg = load_with_overrides(config_path, refine_override);
  const rv::ScenarioOutcome outcome = rv::run_scenario(cfg);
  for (const rv::SpectrumEntry& s : outcome.report.spectra) {
    std::cout << cfg.id << " " << s.problem << ": eigenvalue " << s.eigenvalue
              << " (residual " << s.residual << ", deflation " << s.deflation << ")";
    if (!s.next.empty()) {
      std::cout << "; next:";
      for (double v : s.next) std::cout << " " << v;
    }
    std::cout << "\n";
  }
  if (dump_matrices) {
    const std::string dir = out_dir.empty() ? "." : out_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw rv::ConfigError("cannot create output directory: " + dir);
    auto dump = [&](const std::string& name, const rv::Sparse& m) {
      const fs::path p = fs::path(dir) / (cfg.id + "." + name + ".coo");
      std::ofstream out(p, std::ios::binary);
      if (!out) throw rv::ConfigError("cannot write " + p.string());
      out << rv::matrix_coo(m);
      std::cout << "wrote " << p.string() << "\n";
    };
    dump("stiffness", outcome.system.stiffness);
    dump("mass", outcome.system.mass);
    if (outcome.boundary_system) {
      dump("boundary_mass", outcome.system.boundary_mass);
      dump("boundary_stiffness", outcome.system.boundary_stiffness);
    }
  }
  return 0;
}

int run_check(const std::vector<std::string>& config_paths, int refine_override,
              const std::string& out_dir, bool dump_matrices, int workers) {
  // Fail-fast: every config is loaded and validated before any solve starts.
  std::vector<rv::ScenarioConfig> configs;
  for (const std::string& path : config_paths) {
    configs.push_back(load_with_overrides(path, refine_override));
  }

  // Scenarios run concurrently up to the worker budget; results are written
  // serially afterwards in the input order, keeping outputs deterministic.
  std::vector<rv::ScenarioOutcome> outcomes(configs.size());
  const size_t budget = std::max(1, workers);
  for (size_t begin = 0; begin < configs.size(); begin += budget) {
    const size_t end = std::min(configs.size(), begin + budget);
    std::vector<std::future<rv::ScenarioOutcome>> batch;
    for (size_t i = begin; i < end; ++i) {
      batch.push_back(std::async(std::launch::async,
                                 [&configs, i] { return rv::run_scenario(configs[i]); }));
    }
    for (size_t i = begin; i < end; ++i) outcomes[i] = batch[i - begin].get();
  }

  int exit_code = 0;
  for (const rv::ScenarioOutcome& outcome : outcomes) {
    for (const std::string& path : rv::write_outputs(outcome, out_dir, dump_matrices)) {
      std::cout << "wrote " << path << "\n";
    }
    const rv::ScenarioReport& rep = outcome.report;
    std::cout << rep.scenario << ": " << rep.bounds.size() << " bound report(s), "
              << rep.identities.size() << " identity report(s)";
    const std::vector<std::string> findings = rv::finding_ids(rep);
    if (!findings.empty()) {
      std::cout << "; findings:";
      for (const std::string& f : findings) std::cout << " " << f;
    }
    if (!rv::suite_passes(rep)) {
      std::cout << "; FAILED";
      exit_code = 1;
    }
    std::cout << "\n";
  }
  return exit_code;
}

std::vector<std::string> suite_configs(const std::string& scenarios_dir) {
  const fs::path dir = scenarios_dir.empty() ? fs::path("scenarios") : fs::path(scenarios_dir);
  if (!fs::is_directory(dir)) {
    throw rv::ConfigError("scenario directory not found: " + dir.string() +
                          " (set --scenarios)");
  }
  std::vector<std::string> paths;
  for (const char* name : kSuiteScenarios) {
    const fs::path p = dir / (std::string(name) + ".cfg");
    if (!fs::exists(p)) throw rv::ConfigError("suite scenario missing: " + p.string());
    paths.push_back(p.string());
  }
  return paths;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reilly-verify: eigenvalue estimates on discretized surfaces"};
  app.require_subcommand(1);

  // --- generate -------------------------------------------------------------
  auto* gen = app.add_subcommand("generate", "build a mesh and optionally write it");
  rv::ShapeSpec spec;
  std::string gen_out;
  gen->add_option("kind", spec.kind, "shape kind")->required();
  gen->add_option("--radius", spec.radius, "sphere/disk radius");
  gen->add_option("--a", spec.a, "ellipsoid semi-axis a");
  gen->add_option("--b", spec.b, "ellipsoid semi-axis b");
  gen->add_option("--c", spec.c, "ellipsoid semi-axis c");
  gen->add_option("--rho", spec.rho, "geodesic radius in the curved models");
  gen->add_option("--r0", spec.r0, "annulus inner radius");
  gen->add_option("--r1", spec.r1, "annulus outer radius");
  gen->add_option("--refine", spec.refine, "subdivision level (0..8)");
  gen->add_option("--density", spec.density.kind, "density preset: zero|linear|quadratic");
  gen->add_option("--density-coeff", spec.density.coeff, "density coefficient");
  gen->add_option("--jitter", spec.jitter, "relative interior vertex perturbation");
  gen->add_option("-o,--out", gen_out, "output mesh path");

  // --- spectrum ---------------------------------------------------------------
  auto* spectrum = app.add_subcommand("spectrum", "solve the configured eigenproblems");
  std::string spec_config, spec_out;
  int spec_refine = -1;
  bool spec_dump = false;
  spectrum->add_option("--config", spec_config, "scenario config path")->required();
  spectrum->add_option("--refine", spec_refine, "override the config refinement");
  spectrum->add_option("--out", spec_out, "directory for matrix dumps");
  spectrum->add_flag("--dump-matrices", spec_dump, "write coordinate-format matrices");

  // --- check ------------------------------------------------------------------
  auto* check = app.add_subcommand("check", "run bounds and identities, write reports");
  std::vector<std::string> check_configs;
  std::string check_out = "out", suite, scenarios_dir;
  int check_refine = -1, workers = 1;
  bool check_dump = false;
  check->add_option("--config", check_configs, "scenario config path(s)");
  check->add_option("--refine", check_refine, "override the config refinement");
  check->add_option("--out", check_out, "output directory");
  check->add_option("--suite", suite, "named scenario batch (paper)");
  check->add_option("--scenarios", scenarios_dir, "directory holding the suite configs");
  check->add_flag("--dump-matrices", check_dump, "write coordinate-format matrices");
  check->add_option("--workers", workers, "concurrent scenario budget")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // usage problems exit 2; --help exits 0
  }

  try {
    if (gen->parsed()) return run_generate(spec, gen_out);
    if (spectrum->parsed()) return run_spectrum(spec_config, spec_refine, spec_out, spec_dump);
    if (suite.empty() && check_configs.empty()) {
      std::cerr << "error: check needs --config or --suite\n";
      return 2;
    }
    if (!suite.empty()) {
      if (suite != "paper") {
        std::cerr << "error: unknown suite '" << suite << "' (available: paper)\n";
        return 2;
      }
      for (const std::string& p : suite_configs(scenarios_dir)) check_configs.push_back(p);
    }
    return run_check(check_configs, check_refine, check_out, check_dump, workers);
  } catch (const rv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const rv::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const rv::ValidationError& e) {
    std::cerr << "mesh validation error: " << e.what() << "\n";
    return 2;
  } catch (const rv::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
