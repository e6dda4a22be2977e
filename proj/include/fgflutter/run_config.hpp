#pragma once

#include "fgflutter/assembly.hpp"
#include "fgflutter/material.hpp"
#include "fgflutter/mesh.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fgflutter {

enum class NormalizationMode {
  fgm,        // metal bending stiffness and density at the reference temperature
  ceramic,    // ceramic E coefficient P0 and ceramic density
  isotropic,  // lambda a^3 / (pi^4 D) of the ceramic phase
};

NormalizationMode parse_normalization(const std::string& text);
std::string to_string(NormalizationMode mode);

enum class SolverRoute {
  modal,  // Rayleigh-Ritz on the lowest free-vibration modes
  dense,  // full reduced system
};

struct RunConfig {
  // [geometry]
  double a = 1.0;
  std::vector<double> aspect_ratio{1.0};     // a / b
  std::vector<double> thickness_ratio{20.0}; // a / h
  std::vector<double> skew_deg{0.0};
  std::vector<double> cutout_ratio{0.0};     // r / a, 0 for a plain plate

  // [material]
  std::string ceramic = "Si3N4";
  std::string metal = "SUS304";
  std::optional<std::filesystem::path> material_file;
  std::vector<double> gradient_index{0.0};
  std::vector<std::pair<double, double>> temperatures{{300.0, 300.0}};  // (Tc, Tm)
  double reference_temperature = 300.0;
  std::optional<double> shear_correction;  // factor on E (v4 = v5 = its square root); unset means 5/6
  double nu = 0.28;
  PoissonMode poisson_mode = PoissonMode::constant;
  int quadrature_points = 20;

  // [analysis]
  std::vector<BoundaryCondition> bc{BoundaryCondition::SSSS};
  NormalizationMode normalization = NormalizationMode::fgm;
  std::vector<double> damping{0.0};  // nondimensional, 0 for the undamped sweep
  double flow_angle_deg = 0.0;

  // [mesh]
  int nx = 24;
  int ny = 24;
  SplitPattern pattern = SplitPattern::diagonal;
  int cutout_refinement = 2;
  double shear_stabilization = kDefaultShearStabilization;  // alpha in t^2 / (t^2 + alpha h_e^2)

  // [sweep], lambda in reported (normalized) units
  double lambda_start = 0.0;
  double lambda_end = 2000.0;
  int steps = 200;
  int modes_tracked = 10;
  int basis_modes = 40;
  double coalescence_tol = 1e-6;
  double bisection_tol = 1e-4;
  int extensions = 4;
  SolverRoute solver = SolverRoute::modal;

  // [output]
  std::filesystem::path output_directory = "fgflutter-out";

  /// Throws ConfigurationError on empty lists, out-of-range values or unknown materials.
  void validate() const;
};

/// One "section.key=value" override, applied on top of the file.
struct ConfigOverride {
  std::string key;
  std::string value;
};

ConfigOverride parse_override(const std::string& text);

/// INI text with [geometry], [material], [analysis], [mesh], [sweep] and
/// [output] sections. Lists are comma separated; temperatures are "Tc/Tm".
/// Unknown sections or keys are rejected.
RunConfig parse_run_config(std::istream& in, const std::vector<ConfigOverride>& overrides = {});
RunConfig load_run_config(const std::filesystem::path& path, const std::vector<ConfigOverride>& overrides = {});
/// Defaults with the overrides applied; used when no file is given.
RunConfig default_run_config(const std::vector<ConfigOverride>& overrides = {});

/// Writes the config back in the same grammar.
void write_run_config(std::ostream& out, const RunConfig& config);

}  // namespace fgflutter
