// Command-line front end: batch runs, reference studies and mesh export.

#include "fgflutter/error.hpp"
#include "fgflutter/pipeline.hpp"
#include "fgflutter/reference_tables.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

namespace fs = std::filesystem;
using namespace fgflutter;

namespace {

struct CommonOptions {
  std::string config;
  std::string out;
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  int verbosity = 0;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* app, CommonOptions& o) {
  app->add_option("-c,--config", o.config, "Run configuration (INI)")->check(CLI::ExistingFile);
  app->add_option("-o,--out", o.out, "Output directory (overrides output.directory)");
  app->add_option("-j,--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
  app->add_flag("-v,--verbose", o.verbosity, "Progress on stderr; repeat for more detail");
  app->add_option("--set", o.overrides, "Config override section.key=value (repeatable)");
}

RunConfig load(const CommonOptions& o) {
  std::vector<ConfigOverride> overrides;
  for (const auto& text : o.overrides) overrides.push_back(parse_override(text));
  RunConfig c = o.config.empty() ? default_run_config(overrides) : load_run_config(o.config, overrides);
  if (!o.out.empty()) c.output_directory = o.out;
  return c;
}

int run_command(const CommonOptions& o) {
  const RunConfig config = load(o);
  RunOptions options{o.workers, o.verbosity, &std::cerr};
  const auto results = run_all(config, options);
  const int failures = write_run_outputs(config.output_directory, config, results);
  write_report(std::cout, config, results);
  std::cout << "\nwrote " << (config.output_directory / "results.csv").string() << '\n';
  return failures > 0 ? 1 : 0;
}

int table_command(const CommonOptions& o, const std::string& id) {
  const RunConfig base = load(o);
  RunOptions options{o.workers, o.verbosity, &std::cerr};
  const TableReport report = run_table(id, base, options);
  fs::create_directories(base.output_directory);
  {
    std::ofstream csv(base.output_directory / (id + ".csv"));
    write_table_csv(csv, report);
    std::ofstream txt(base.output_directory / (id + ".txt"));
    write_table_report(txt, report);
  }
  write_table_report(std::cout, report);
  int failed = 0;
  for (const auto& r : report.results) failed += r.status == CaseStatus::failed;
  return failed > 0 ? 1 : 0;
}

int mesh_export_command(const CommonOptions& o, bool matrices) {
  const RunConfig config = load(o);
  fs::create_directories(config.output_directory);
  const ConstituentSet constituents = resolve_constituents(config);
  std::set<std::tuple<double, double, double>> seen;
  int index = 0;
  for (const CaseSpec& spec : expand_cases(config)) {
    if (!seen.insert({spec.aspect_ratio, spec.skew_deg, spec.cutout_ratio}).second) continue;
    ++index;
    const double a = config.a, b = a / spec.aspect_ratio;
    TriMesh mesh = spec.cutout_ratio > 0.0 ? cutout_mesh(a, b, spec.cutout_ratio * a, config.cutout_refinement)
                                           : structured_rect_mesh(a, b, config.nx, config.ny, config.pattern);
    if (spec.skew_deg != 0.0) mesh = apply_skew(std::move(mesh), spec.skew_deg * std::numbers::pi / 180.0);
    std::ostringstream name;
    name << "mesh_" << std::setw(3) << std::setfill('0') << index << ".txt";
    std::ofstream out(config.output_directory / name.str());
    write_mesh(out, mesh);
    std::cout << name.str() << ": a/b=" << spec.aspect_ratio << " psi=" << spec.skew_deg
              << " r/a=" << spec.cutout_ratio << ", " << mesh.node_count() << " nodes, " << mesh.triangle_count()
              << " triangles, min quality " << min_quality(mesh) << '\n';
  }
  if (matrices) {
    const CaseSpec spec = expand_cases(config).front();
    const PlateModel model = build_model(config, constituents, spec, o.workers);
    const std::pair<const char*, const SparseMatrix*> dumps[] = {
        {"K.txt", &model.system.K}, {"KG.txt", &model.system.KG}, {"M.txt", &model.system.M},
        {"A.txt", &model.system.A}, {"DA.txt", &model.system.DA}};
    for (const auto& [file, matrix] : dumps) {
      std::ofstream out(config.output_directory / file);
      write_coordinate(out, *matrix);
    }
    std::cout << "reduced matrices of the first case (" << model.system.size() << " DOFs) written\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Supersonic flutter of functionally graded plates with smoothed triangular elements"};
  app.require_subcommand(1);

  CommonOptions run_opts, table_opts, mesh_opts;
  auto* run = app.add_subcommand("run", "Run every parameter combination of a configuration");
  add_common(run, run_opts);

  auto* table = app.add_subcommand("table", "Reproduce a reference study and compare against published values");
  add_common(table, table_opts);
  std::string table_id;
  table->add_option("id", table_id, "Study id")->required()->check(CLI::IsMember(table_ids()));

  auto* mesh = app.add_subcommand("mesh-export", "Write the meshes of a configuration in the text mesh format");
  add_common(mesh, mesh_opts);
  bool matrices = false;
  mesh->add_flag("--matrices", matrices, "Also dump the reduced K, KG, M, A, DA of the first case");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return run_command(run_opts);
    if (*table) return table_command(table_opts, table_id);
    if (*mesh) return mesh_export_command(mesh_opts, matrices);
  } catch (const ConfigurationError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
