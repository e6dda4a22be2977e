#include "fgflutter/error.hpp"
#include "fgflutter/pipeline.hpp"
#include "fgflutter/reference_tables.hpp"
#include "fgflutter/run_config.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fgflutter;

namespace {

const char* const kSample = R"(# batch of two gradient indices
[geometry]
a = 0.5
aspect_ratio = 1, 2
thickness_ratio = 20
skew_deg = 0, 15

[material]
ceramic = Si3N4
metal = SUS304
gradient_index = 0, 2.5
temperatures = 300/300, 600/300
shear_correction = 0.8

[analysis]
bc = SSSS, CCCC
normalization = ceramic
damping = 0, 1.5

[mesh]
nx = 10
ny = 6
pattern = union_jack
shear_stabilization = 0.05

[sweep]
lambda_end = 1500
steps = 150
solver = dense

[output]
directory = somewhere
)";

RunConfig parse(const std::string& text, const std::vector<ConfigOverride>& overrides = {}) {
  std::istringstream in(text);
  return parse_run_config(in, overrides);
}

std::string written(const RunConfig& c) {
  std::ostringstream out;
  write_run_config(out, c);
  return out.str();
}

}  // namespace

TEST_CASE("INI parsing") {
  const RunConfig c = parse(kSample);
  CHECK(c.a == 0.5);
  CHECK(c.aspect_ratio == std::vector<double>{1.0, 2.0});
  CHECK(c.skew_deg == std::vector<double>{0.0, 15.0});
  CHECK(c.gradient_index == std::vector<double>{0.0, 2.5});
  REQUIRE(c.temperatures.size() == 2u);
  CHECK(c.temperatures[1] == std::pair{600.0, 300.0});
  CHECK(c.shear_correction.value() == 0.8);
  CHECK(c.bc == std::vector<BoundaryCondition>{BoundaryCondition::SSSS, BoundaryCondition::CCCC});
  CHECK(c.normalization == NormalizationMode::ceramic);
  CHECK(c.damping == std::vector<double>{0.0, 1.5});
  CHECK(c.nx == 10);
  CHECK(c.ny == 6);
  CHECK(c.pattern == SplitPattern::union_jack);
  CHECK(c.shear_stabilization == 0.05);
  CHECK(c.lambda_end == 1500.0);
  CHECK(c.steps == 150);
  CHECK(c.solver == SolverRoute::dense);
  CHECK(c.output_directory == "somewhere");
  // Untouched keys keep their defaults.
  CHECK(c.basis_modes == 40);
  CHECK(c.nu == 0.28);
}

TEST_CASE("written configs parse back to the same text") {
  const RunConfig c = parse(kSample);
  const std::string once = written(c);
  CHECK(written(parse(once)) == once);
  const std::string plain = written(RunConfig{});
  CHECK(written(parse(plain)) == plain);
}

TEST_CASE("overrides") {
  const ConfigOverride o = parse_override("mesh.nx=16");
  CHECK(o.key == "mesh.nx");
  CHECK(o.value == "16");
  const RunConfig c = parse(kSample, {parse_override("mesh.nx=16"), parse_override("material.gradient_index = 1,2,3")});
  CHECK(c.nx == 16);
  CHECK(c.gradient_index == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(default_run_config({parse_override("sweep.steps=7")}).steps == 7);
  CHECK_THROWS_AS(parse_override("no-equals-sign"), ConfigurationError);
  CHECK_THROWS_AS(parse_override("nosection=1"), ConfigurationError);
  CHECK_THROWS_AS(default_run_config({parse_override("mesh.colour=red")}), ConfigurationError);
}

TEST_CASE("invalid configurations are rejected") {
  const auto rejects = [](const std::string& text) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse(text), ConfigurationError);
  };
  rejects("[geometry]\nlength = 1\n");
  rejects("[weather]\nwind = 3\n");
  rejects("[material]\ngradient_index =\n");
  rejects("[material]\ngradient_index = , ,\n");
  rejects("[material]\ngradient_index = -1\n");
  rejects("[material]\ntemperatures = 300\n");
  rejects("[material]\nceramic = Unobtainium\n");
  rejects("[material]\nnu = 0.5\n");
  rejects("[analysis]\nbc = SCSC\n");
  rejects("[analysis]\ndamping = -1\n");
  rejects("[analysis]\nnormalization = metric\n");
  rejects("[mesh]\nnx = 0\n");
  rejects("[mesh]\nnx = 2.5\n");
  rejects("[mesh]\npattern = spiral\n");
  rejects("[mesh]\nshear_stabilization = -0.1\n");
  rejects("[sweep]\nlambda_start = 10\nlambda_end = 5\n");
  rejects("[sweep]\nsteps = abc\n");
  rejects("[sweep]\nmodes_tracked = 12\nbasis_modes = 10\n");
  rejects("[sweep]\nbisection_tol = 1\n");
  rejects("[sweep]\nsolver = magic\n");
  rejects("[geometry]\nthickness_ratio = 0\n");
  rejects("[geometry]\ncutout_ratio = 0.5\n");
}

TEST_CASE("case grid order") {
  const RunConfig c = parse(kSample);
  const std::vector<CaseSpec> cases = expand_cases(c);
  CHECK(cases.size() == 2u * 2u * 1u * 2u * 1u * 2u * 2u);
  CHECK(cases.front().bc == BoundaryCondition::SSSS);
  CHECK(cases.back().bc == BoundaryCondition::CCCC);
  // Temperatures vary fastest, then n.
  CHECK(cases[0].Tc == 300.0);
  CHECK(cases[1].Tc == 600.0);
  CHECK(cases[2].n == 2.5);
}

TEST_CASE("reference value parsing") {
  std::istringstream in(
      "# comment\n"
      "study,mesh,bc,aspect_ratio,thickness_ratio,skew_deg,cutout_ratio,n,Tc,Tm,damped,quantity,value,flag\n"
      "validation,*,SSSS,1,20,0,0,1,600,300,0,lambda,496.29,\n"
      "temperature,*,SSSS,1,20,0,0,0,300,300,1,lambda,787.81,calibration\n");
  const auto rows = parse_reference_values(in);
  REQUIRE(rows.size() == 2u);
  CHECK(rows[0].spec.Tc == 600.0);
  CHECK(rows[0].spec.n == 1.0);
  CHECK_FALSE(rows[0].damped);
  CHECK(rows[0].flag.empty());
  CHECK(rows[1].damped);
  CHECK(rows[1].flag == "calibration");

  std::istringstream short_row("header\nvalidation,*,SSSS,1\n");
  CHECK_THROWS_AS(parse_reference_values(short_row), ConfigurationError);
  std::istringstream bad_number("header\nvalidation,*,SSSS,x,20,0,0,1,600,300,0,lambda,496.29,\n");
  CHECK_THROWS_AS(parse_reference_values(bad_number), ConfigurationError);
}

TEST_CASE("embedded reference values carry the misprint flags") {
  const auto& all = reference_values();
  CHECK(all.size() > 200u);
  int typos = 0;
  for (const auto& r : all) {
    if (r.flag != "typo") continue;
    ++typos;
    CHECK((r.value == 57.0313 || r.value == 409.2188));
  }
  CHECK(typos == 2);
  for (const auto& id : table_ids()) {
    CAPTURE(id);
    CHECK(std::any_of(all.begin(), all.end(), [&](const ReferenceValue& r) { return r.study == id; }));
  }
}

TEST_CASE("table definitions") {
  RunConfig base;
  base.nx = base.ny = 12;
  const TableDefinition mesh = table_definition("mesh_convergence", base);
  REQUIRE(mesh.blocks.size() == 4u);
  CHECK(mesh.blocks.front().mesh == "8x8");
  CHECK(mesh.blocks.back().mesh == "40x40");
  CHECK(mesh.blocks.back().config.normalization == NormalizationMode::isotropic);

  const TableDefinition cutout = table_definition("cutout", base);
  REQUIRE(cutout.blocks.size() == 1u);
  CHECK(cutout.blocks[0].mesh == "12x12");
  CHECK(cutout.blocks[0].config.cutout_ratio.size() == 5u);
  CHECK(expand_cases(cutout.blocks[0].config).size() == 30u);

  const TableDefinition temperature = table_definition("temperature", base);
  CHECK(temperature.blocks[0].config.damping == std::vector<double>{0.0, kReferenceDamping});
  CHECK_THROWS_AS(table_definition("everything", base), ConfigurationError);
}

TEST_CASE("batch runs are deterministic across worker counts") {
  RunConfig c;
  c.gradient_index = {0.0, 1.0, 5.0};
  c.temperatures = {{300.0, 300.0}, {600.0, 300.0}};
  c.nx = c.ny = 6;
  c.basis_modes = 20;
  const auto serial = run_all(c, RunOptions{1, 0, nullptr});
  const auto parallel = run_all(c, RunOptions{4, 0, nullptr});
  REQUIRE(serial.size() == 6u);
  REQUIRE(parallel.size() == serial.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CAPTURE(i);
    CHECK(serial[i].status == CaseStatus::ok);
    CHECK(serial[i].spec.n == parallel[i].spec.n);
    CHECK(serial[i].flutter.lambda_cr == parallel[i].flutter.lambda_cr);
    CHECK(serial[i].flutter.omega_cr_sq == parallel[i].flutter.omega_cr_sq);
  }
}

TEST_CASE("run outputs on disk") {
  RunConfig c;
  c.nx = c.ny = 4;
  c.basis_modes = 20;
  const auto dir = std::filesystem::temp_directory_path() / "fgflutter-unit-run";
  std::filesystem::remove_all(dir);
  const auto results = run_all(c, RunOptions{});
  CHECK(write_run_outputs(dir, c, results) == 0);
  CHECK(std::filesystem::exists(dir / "results.csv"));
  CHECK(std::filesystem::exists(dir / "report.txt"));
  std::ifstream saved(dir / "config.ini");
  CHECK(written(parse_run_config(saved)) == written(c));
  std::filesystem::remove_all(dir);
}

TEST_CASE("material files resolve against the config directory") {
  const auto dir = std::filesystem::temp_directory_path() / "fgflutter-unit-materials";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "mats.ini") << "[Steel]\nE = 200e9\nalpha = 12e-6\nrho = 7800\nkappa = 40\nnu = 0.3\n";
  std::ofstream(dir / "run.ini") << "[material]\nfile = mats.ini\nmetal = Steel\n";
  const RunConfig c = load_run_config(dir / "run.ini");
  CHECK(c.material_file->is_absolute());
  CHECK(std::filesystem::equivalent(*c.material_file, dir / "mats.ini"));
  CHECK(resolve_constituents(c).metal.rho == 7800.0);
  std::ofstream(dir / "broken.ini") << "[material]\nfile = missing.ini\n";
  CHECK_THROWS_AS(load_run_config(dir / "broken.ini"), ConfigurationError);
  CHECK_THROWS_AS(load_run_config(dir / "absent.ini"), ConfigurationError);
  std::filesystem::remove_all(dir);
}
