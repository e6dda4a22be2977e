#include "fgflutter/reference_tables.hpp"

#include "fgflutter/error.hpp"

#include <boost/algorithm/string.hpp>

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace fgflutter {

namespace {

constexpr const char* kEmbeddedReferences =
#include "reference_data.inc"
    ;

bool same(double x, double y) { return std::abs(x - y) <= 1e-9 * std::max({1.0, std::abs(x), std::abs(y)}); }

}  // namespace

std::vector<ReferenceValue> parse_reference_values(std::istream& in) {
  std::vector<ReferenceValue> out;
  std::string line;
  bool header_seen = false;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    boost::algorithm::trim(line);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<std::string> f;
    boost::algorithm::split(f, line, boost::algorithm::is_any_of(","));
    if (f.size() != 14) {
      throw ConfigurationError("reference line " + std::to_string(line_number) + ": expected 14 fields");
    }
    try {
      ReferenceValue r;
      r.study = f[0];
      r.mesh = f[1];
      r.spec.bc = parse_boundary_condition(f[2]);
      r.spec.aspect_ratio = std::stod(f[3]);
      r.spec.thickness_ratio = std::stod(f[4]);
      r.spec.skew_deg = std::stod(f[5]);
      r.spec.cutout_ratio = std::stod(f[6]);
      r.spec.n = std::stod(f[7]);
      r.spec.Tc = std::stod(f[8]);
      r.spec.Tm = std::stod(f[9]);
      r.damped = f[10] == "1";
      r.quantity = f[11];
      r.value = std::stod(f[12]);
      r.flag = f[13];
      out.push_back(std::move(r));
    } catch (const std::invalid_argument&) {
      throw ConfigurationError("reference line " + std::to_string(line_number) + ": malformed number");
    }
  }
  return out;
}

const std::vector<ReferenceValue>& reference_values() {
  static const std::vector<ReferenceValue> values = [] {
    std::istringstream in(kEmbeddedReferences);
    return parse_reference_values(in);
  }();
  return values;
}

const std::vector<std::string>& table_ids() {
  static const std::vector<std::string> ids{"mesh_convergence", "validation", "aspect_ratio", "temperature",
                                            "skew",             "boundary",   "thickness",    "cutout"};
  return ids;
}

TableDefinition table_definition(const std::string& id, const RunConfig& base) {
  RunConfig c = base;
  c.a = 1.0;
  c.aspect_ratio = {1.0};
  c.thickness_ratio = {20.0};
  c.skew_deg = {0.0};
  c.cutout_ratio = {0.0};
  c.ceramic = "Si3N4";
  c.metal = "SUS304";
  c.material_file.reset();
  c.gradient_index = {0, 1, 2, 3, 4, 5};
  c.temperatures = {{300.0, 300.0}};
  c.nu = 0.28;
  c.bc = {BoundaryCondition::SSSS};
  c.normalization = NormalizationMode::fgm;
  c.damping = {0.0};
  c.flow_angle_deg = 0.0;
  c.lambda_start = 0.0;
  c.lambda_end = 2000.0;

  auto label = [](const RunConfig& rc) { return std::to_string(rc.nx) + "x" + std::to_string(rc.ny); };
  TableDefinition def;
  def.id = id;
  if (id == "mesh_convergence") {
    def.title = "Mesh convergence of lambda a^3/(pi^4 D), isotropic square and skew plates, a/h = 100";
    c.ceramic = c.metal = "Aluminium";
    c.nu = 0.3;
    c.gradient_index = {0};
    c.thickness_ratio = {100.0};
    c.skew_deg = {0.0, 30.0};
    c.normalization = NormalizationMode::isotropic;
    c.lambda_end = 20.0;
    for (int n : {8, 16, 32, 40}) {
      RunConfig block = c;
      block.nx = block.ny = n;
      def.blocks.push_back({label(block), block});
    }
    return def;
  }
  if (id == "validation") {
    def.title = "FGM square plate, a/h = 20, SSSS, uniform and graded temperature";
    c.gradient_index = {0, 1, 5};
    c.temperatures = {{300.0, 300.0}, {600.0, 300.0}};
  } else if (id == "temperature") {
    def.title = "Temperature and aerodynamic damping, FGM square plate, a/h = 20, SSSS";
    c.temperatures = {{300.0, 300.0}, {600.0, 300.0}};
    c.damping = {0.0, kReferenceDamping};
  } else if (id == "aspect_ratio") {
    def.title = "Aspect ratio a/b and gradient index, a/h = 100, SSSS, ceramic normalization";
    c.aspect_ratio = {0.5, 1.0, 2.0, 3.0, 5.0};
    c.thickness_ratio = {100.0};
    c.normalization = NormalizationMode::ceramic;
  } else if (id == "skew") {
    def.title = "Skew angle and gradient index, a/h = 20, SSSS, 600/300 K";
    c.skew_deg = {0.0, 10.0, 15.0, 20.0, 25.0, 30.0};
    c.temperatures = {{600.0, 300.0}};
  } else if (id == "boundary") {
    def.title = "Boundary conditions and aspect ratio, a/h = 20";
    c.bc = {BoundaryCondition::SSSS, BoundaryCondition::CCCC};
    c.aspect_ratio = {1.0, 2.0};
  } else if (id == "thickness") {
    def.title = "Thickness ratio a/h and gradient index, SSSS square plate";
    c.thickness_ratio = {5.0, 10.0, 20.0, 50.0, 100.0};
  } else if (id == "cutout") {
    def.title = "Central circular cutout r/a and gradient index, a/h = 20, SSSS";
    c.cutout_ratio = {0.0, 0.1, 0.2, 0.3, 0.4};
  } else {
    std::string known;
    for (const auto& t : table_ids()) known += (known.empty() ? "" : ", ") + t;
    throw ConfigurationError("unknown table '" + id + "' (expected one of " + known + ")");
  }
  def.blocks.push_back({label(c), c});
  return def;
}

double reference_quantity(const CaseResult& result, const std::string& quantity) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (quantity == "omega1_sq") return result.omega1_sq;
  if (quantity == "omega2_sq") return result.omega2_sq;
  if (result.status != CaseStatus::ok) return nan;
  if (quantity == "lambda") return result.flutter.lambda_cr;
  if (quantity == "omega_sq") return result.flutter.omega_cr_sq;
  return nan;
}

std::vector<ReferenceValue> matching_references(const std::string& study, const std::string& mesh,
                                                const CaseResult& result) {
  std::vector<ReferenceValue> out;
  const CaseSpec& s = result.spec;
  for (const auto& r : reference_values()) {
    if (r.study != study || (r.mesh != "*" && r.mesh != mesh)) continue;
    if (r.damped != (result.damping > 0.0) || r.spec.bc != s.bc) continue;
    if (!same(r.spec.aspect_ratio, s.aspect_ratio) || !same(r.spec.thickness_ratio, s.thickness_ratio) ||
        !same(r.spec.skew_deg, s.skew_deg) || !same(r.spec.cutout_ratio, s.cutout_ratio) || !same(r.spec.n, s.n) ||
        !same(r.spec.Tc, s.Tc) || !same(r.spec.Tm, s.Tm)) {
      continue;
    }
    out.push_back(r);
  }
  return out;
}

TableReport run_table(const std::string& id, const RunConfig& base, const RunOptions& options) {
  return run_table(table_definition(id, base), options);
}

TableReport run_table(const TableDefinition& definition, const RunOptions& options) {
  TableReport report;
  report.definition = definition;
  const std::string& id = definition.id;
  for (const auto& block : report.definition.blocks) {
    for (auto& result : run_all(block.config, options)) {
      for (const auto& ref : matching_references(id, block.mesh, result)) {
        ComparisonRow row;
        row.mesh = block.mesh;
        row.result = result;
        row.quantity = ref.quantity;
        row.reference = ref.value;
        row.computed = reference_quantity(result, ref.quantity);
        row.relative_deviation = (row.computed - ref.value) / ref.value;
        row.flag = ref.flag;
        report.rows.push_back(std::move(row));
      }
      report.meshes.push_back(block.mesh);
      report.results.push_back(std::move(result));
    }
  }
  return report;
}

void write_table_csv(std::ostream& out, const TableReport& report) {
  const auto precision = out.precision();
  out << std::setprecision(10);
  out << "study,mesh,bc,aspect_ratio,thickness_ratio,skew_deg,cutout_ratio,gradient_index,Tc,Tm,damping,status,"
         "quantity,reference,computed,relative_deviation,flag\n";
  for (const auto& row : report.rows) {
    const CaseSpec& s = row.result.spec;
    out << report.definition.id << ',' << row.mesh << ',' << to_string(s.bc) << ',' << s.aspect_ratio << ','
        << s.thickness_ratio << ',' << s.skew_deg << ',' << s.cutout_ratio << ',' << s.n << ',' << s.Tc << ','
        << s.Tm << ',' << row.result.damping << ',' << to_string(row.result.status) << ',' << row.quantity << ','
        << row.reference << ',' << row.computed << ',' << row.relative_deviation << ',' << row.flag << '\n';
  }
  out.precision(precision);
}

void write_table_report(std::ostream& out, const TableReport& report) {
  out << report.definition.title << "\n\n";
  out << std::left << std::setw(8) << "mesh" << std::setw(6) << "bc" << std::setw(6) << "a/b" << std::setw(6)
      << "a/h" << std::setw(5) << "psi" << std::setw(5) << "r/a" << std::setw(4) << "n" << std::setw(9) << "Tc/Tm"
      << std::setw(7) << "g" << std::setw(11) << "quantity" << std::right << std::setw(13) << "reference"
      << std::setw(13) << "computed" << std::setw(10) << "dev %" << "  flag\n";
  std::vector<const ComparisonRow*> typos;
  for (const auto& row : report.rows) {
    const CaseSpec& s = row.result.spec;
    std::ostringstream temps;
    temps << s.Tc << '/' << s.Tm;
    out << std::left << std::setw(8) << row.mesh << std::setw(6) << to_string(s.bc) << std::setw(6)
        << s.aspect_ratio << std::setw(6) << s.thickness_ratio << std::setw(5) << s.skew_deg << std::setw(5)
        << s.cutout_ratio << std::setw(4) << s.n << std::setw(9) << temps.str() << std::setw(7) << row.result.damping
        << std::setw(11) << row.quantity << std::right << std::fixed << std::setprecision(4) << std::setw(13)
        << row.reference << std::setw(13) << row.computed << std::setprecision(2) << std::setw(10)
        << 100.0 * row.relative_deviation;
    out.unsetf(std::ios::floatfield);
    out << std::setprecision(6) << "  " << row.flag << '\n';
    if (row.flag == "typo") typos.push_back(&row);
  }
  if (!typos.empty()) {
    out << "\nSuspected misprints in the reference values (excluded from tolerance checks):\n";
    for (const auto* row : typos) {
      const CaseSpec& s = row->result.spec;
      out << "  " << to_string(s.bc) << " a/b=" << s.aspect_ratio << " a/h=" << s.thickness_ratio
          << " psi=" << s.skew_deg << " n=" << s.n << ": published " << row->reference << ", computed "
          << row->computed << '\n';
    }
  }
  int failed = 0;
  for (const auto& r : report.results) failed += r.status == CaseStatus::failed;
  out << '\n' << report.results.size() << " cases, " << report.rows.size() << " compared values, " << failed
      << " failed cases\n";
}

}  // namespace fgflutter
