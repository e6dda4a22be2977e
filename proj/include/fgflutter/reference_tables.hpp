#pragma once

#include "fgflutter/pipeline.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace fgflutter {

/// Nondimensional aerodynamic damping used by the damped temperature study,
/// in units of sqrt(rho_mo h D_mo) / a^2.
inline constexpr double kReferenceDamping = 2.712;

/// One published value with the parameters that produced it.
struct ReferenceValue {
  std::string study;
  std::string mesh;  // "NxN", or "*" when the value does not depend on the mesh label
  CaseSpec spec;
  bool damped = false;
  std::string quantity;  // lambda, omega_sq, omega1_sq, omega2_sq
  double value = 0.0;
  std::string flag;      // "", typo, inconsistent, calibration
};

/// Parses the reference CSV format; '#' lines are comments.
std::vector<ReferenceValue> parse_reference_values(std::istream& in);
/// The copy of data/reference_values.csv compiled into the library.
const std::vector<ReferenceValue>& reference_values();

/// mesh_convergence, validation, temperature, aspect_ratio, skew, boundary, thickness, cutout.
const std::vector<std::string>& table_ids();

/// A study is one or more run configs; blocks differ only in the mesh.
struct TableBlock {
  std::string mesh;
  RunConfig config;
};

struct TableDefinition {
  std::string id;
  std::string title;
  std::vector<TableBlock> blocks;
};

/// Parameter grid of a study. Mesh density, sweep and solver settings come from
/// `base` except where the study fixes them. Throws ConfigurationError for an unknown id.
TableDefinition table_definition(const std::string& id, const RunConfig& base);

struct ComparisonRow {
  std::string mesh;
  CaseResult result;
  std::string quantity;
  double reference = 0.0;
  double computed = 0.0;
  double relative_deviation = 0.0;  // (computed - reference) / reference
  std::string flag;
};

struct TableReport {
  TableDefinition definition;
  std::vector<std::string> meshes;  // one per result
  std::vector<CaseResult> results;
  std::vector<ComparisonRow> rows;
};

/// Computed value of a reference quantity, NaN when the row did not produce one.
double reference_quantity(const CaseResult& result, const std::string& quantity);

/// Reference values of `study` matching the result's parameters and mesh label.
std::vector<ReferenceValue> matching_references(const std::string& study, const std::string& mesh,
                                                const CaseResult& result);

TableReport run_table(const std::string& id, const RunConfig& base, const RunOptions& options);
/// Same, for a definition the caller has narrowed or re-meshed.
TableReport run_table(const TableDefinition& definition, const RunOptions& options);

/// CSV with the full parameter tuple, reference, computed value and deviation per row.
void write_table_csv(std::ostream& out, const TableReport& report);
/// Aligned text comparison, followed by the list of suspected misprints.
void write_table_report(std::ostream& out, const TableReport& report);

}  // namespace fgflutter
