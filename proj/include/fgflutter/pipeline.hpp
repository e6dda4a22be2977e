#pragma once

#include "fgflutter/flutter.hpp"
#include "fgflutter/run_config.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace fgflutter {

/// One structural configuration from the parameter grid.
struct CaseSpec {
  BoundaryCondition bc = BoundaryCondition::SSSS;
  double aspect_ratio = 1.0;
  double thickness_ratio = 20.0;
  double skew_deg = 0.0;
  double cutout_ratio = 0.0;
  double n = 0.0;
  double Tc = 300.0;
  double Tm = 300.0;
};

/// Cartesian product of the config lists, in a fixed order
/// (bc, aspect ratio, thickness ratio, skew, cutout, n, temperatures).
std::vector<CaseSpec> expand_cases(const RunConfig& config);

/// Ceramic and metal phases named by the config.
ConstituentSet resolve_constituents(const RunConfig& config);

/// Everything needed to sweep one case.
struct PlateModel {
  TriMesh mesh;
  FGMSection section;
  SectionProperties properties;
  GlobalSystem system;  // skew-transformed and reduced
  Normalization normalization;
  double h = 0.0;
};

PlateModel build_model(const RunConfig& config, const ConstituentSet& constituents, const CaseSpec& spec,
                       int workers = 1);

Normalization case_normalization(const RunConfig& config, const ConstituentSet& constituents, double h);

enum class CaseStatus { ok, no_flutter, failed };
std::string to_string(CaseStatus status);

struct CaseResult {
  CaseSpec spec;
  double damping = 0.0;  // nondimensional
  CaseStatus status = CaseStatus::failed;
  std::string message;
  int dofs = 0;
  double omega1_sq = std::numeric_limits<double>::quiet_NaN();  // in-vacuo, normalized
  double omega2_sq = std::numeric_limits<double>::quiet_NaN();
  FlutterResult flutter;  // normalized
};

/// Runs one structural case for every damping value. Numeric failures are
/// caught and reported in the result rows; configuration errors propagate.
std::vector<CaseResult> run_case(const RunConfig& config, const ConstituentSet& constituents, const CaseSpec& spec,
                                 std::span<const double> damping, int workers = 1);

struct RunOptions {
  int workers = 1;
  int verbosity = 0;
  std::ostream* log = nullptr;
};

/// Runs the whole grid on a bounded worker pool. Rows come back in grid order.
std::vector<CaseResult> run_all(const RunConfig& config, const RunOptions& options);

/// results.csv: one self-describing row per case and damping value.
void write_results_csv(std::ostream& out, const RunConfig& config, std::span<const CaseResult> results);
/// Plain-text report of the same rows.
void write_report(std::ostream& out, const RunConfig& config, std::span<const CaseResult> results);

/// Writes results.csv, report.txt, config.ini and branches/case_NNNN.csv under
/// the directory. Returns the number of failed rows.
int write_run_outputs(const std::filesystem::path& directory, const RunConfig& config,
                      std::span<const CaseResult> results);

}  // namespace fgflutter
