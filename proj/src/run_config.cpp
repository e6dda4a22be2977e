#include "fgflutter/run_config.hpp"

#include "fgflutter/error.hpp"
#include "fgflutter/material_io.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace fgflutter {

namespace pt = boost::property_tree;

NormalizationMode parse_normalization(const std::string& text) {
  const std::string v = boost::algorithm::to_lower_copy(boost::algorithm::trim_copy(text));
  if (v == "fgm") return NormalizationMode::fgm;
  if (v == "ceramic") return NormalizationMode::ceramic;
  if (v == "isotropic") return NormalizationMode::isotropic;
  throw ConfigurationError("unknown normalization '" + text + "' (expected fgm, ceramic or isotropic)");
}

std::string to_string(NormalizationMode mode) {
  switch (mode) {
    case NormalizationMode::fgm: return "fgm";
    case NormalizationMode::ceramic: return "ceramic";
    case NormalizationMode::isotropic: return "isotropic";
  }
  return "?";
}

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"geometry", {"a", "aspect_ratio", "thickness_ratio", "skew_deg", "cutout_ratio"}},
      {"material",
       {"ceramic", "metal", "file", "gradient_index", "temperatures", "reference_temperature", "shear_correction",
        "nu", "poisson_mode", "quadrature_points"}},
      {"analysis", {"bc", "normalization", "damping", "flow_angle_deg"}},
      {"mesh", {"nx", "ny", "pattern", "cutout_refinement", "shear_stabilization"}},
      {"sweep",
       {"lambda_start", "lambda_end", "steps", "modes_tracked", "basis_modes", "coalescence_tol", "bisection_tol",
        "extensions", "solver"}},
      {"output", {"directory"}},
  };
  return keys;
}

std::string where(const std::string& section, const std::string& key) { return section + "." + key; }

double to_double(const std::string& text, const std::string& at) {
  const std::string t = boost::algorithm::trim_copy(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ConfigurationError(at + ": '" + text + "' is not a number");
  }
  if (used != t.size() || !std::isfinite(v)) throw ConfigurationError(at + ": '" + text + "' is not a number");
  return v;
}

int to_int(const std::string& text, const std::string& at) {
  const double v = to_double(text, at);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigurationError(at + ": '" + text + "' is not an integer");
  return static_cast<int>(v);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  boost::algorithm::split(parts, text, boost::algorithm::is_any_of(","));
  std::vector<std::string> out;
  for (auto& p : parts) {
    boost::algorithm::trim(p);
    if (!p.empty()) out.push_back(p);
  }
  return out;
}

std::vector<double> to_list(const std::string& text, const std::string& at) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(to_double(item, at));
  if (out.empty()) throw ConfigurationError(at + ": list must not be empty");
  return out;
}

void apply(RunConfig& c, const std::string& section, const std::string& key, const std::string& value) {
  const std::string at = where(section, key);
  const std::string v = boost::algorithm::trim_copy(value);
  if (section == "geometry") {
    if (key == "a") c.a = to_double(v, at);
    else if (key == "aspect_ratio") c.aspect_ratio = to_list(v, at);
    else if (key == "thickness_ratio") c.thickness_ratio = to_list(v, at);
    else if (key == "skew_deg") c.skew_deg = to_list(v, at);
    else if (key == "cutout_ratio") c.cutout_ratio = to_list(v, at);
  } else if (section == "material") {
    if (key == "ceramic") c.ceramic = v;
    else if (key == "metal") c.metal = v;
    else if (key == "file") c.material_file = v.empty() ? std::nullopt : std::optional<std::filesystem::path>(v);
    else if (key == "gradient_index") c.gradient_index = to_list(v, at);
    else if (key == "temperatures") {
      c.temperatures.clear();
      for (const auto& item : split_list(v)) {
        const auto slash = item.find('/');
        if (slash == std::string::npos) throw ConfigurationError(at + ": expected Tc/Tm, got '" + item + "'");
        c.temperatures.emplace_back(to_double(item.substr(0, slash), at), to_double(item.substr(slash + 1), at));
      }
      if (c.temperatures.empty()) throw ConfigurationError(at + ": list must not be empty");
    } else if (key == "reference_temperature") c.reference_temperature = to_double(v, at);
    else if (key == "shear_correction") c.shear_correction = v.empty() ? std::nullopt : std::optional(to_double(v, at));
    else if (key == "nu") c.nu = to_double(v, at);
    else if (key == "poisson_mode") {
      const std::string m = boost::algorithm::to_lower_copy(v);
      if (m == "constant") c.poisson_mode = PoissonMode::constant;
      else if (m == "mori_tanaka") c.poisson_mode = PoissonMode::mori_tanaka;
      else throw ConfigurationError(at + ": expected constant or mori_tanaka, got '" + v + "'");
    } else if (key == "quadrature_points") c.quadrature_points = to_int(v, at);
  } else if (section == "analysis") {
    if (key == "bc") {
      c.bc.clear();
      for (const auto& item : split_list(v)) c.bc.push_back(parse_boundary_condition(item));
      if (c.bc.empty()) throw ConfigurationError(at + ": list must not be empty");
    } else if (key == "normalization") c.normalization = parse_normalization(v);
    else if (key == "damping") c.damping = to_list(v, at);
    else if (key == "flow_angle_deg") c.flow_angle_deg = to_double(v, at);
  } else if (section == "mesh") {
    if (key == "nx") c.nx = to_int(v, at);
    else if (key == "ny") c.ny = to_int(v, at);
    else if (key == "pattern") {
      const std::string m = boost::algorithm::to_lower_copy(v);
      if (m == "diagonal") c.pattern = SplitPattern::diagonal;
      else if (m == "union_jack") c.pattern = SplitPattern::union_jack;
      else throw ConfigurationError(at + ": expected diagonal or union_jack, got '" + v + "'");
    } else if (key == "cutout_refinement") c.cutout_refinement = to_int(v, at);
    else if (key == "shear_stabilization") c.shear_stabilization = to_double(v, at);
  } else if (section == "sweep") {
    if (key == "lambda_start") c.lambda_start = to_double(v, at);
    else if (key == "lambda_end") c.lambda_end = to_double(v, at);
    else if (key == "steps") c.steps = to_int(v, at);
    else if (key == "modes_tracked") c.modes_tracked = to_int(v, at);
    else if (key == "basis_modes") c.basis_modes = to_int(v, at);
    else if (key == "coalescence_tol") c.coalescence_tol = to_double(v, at);
    else if (key == "bisection_tol") c.bisection_tol = to_double(v, at);
    else if (key == "extensions") c.extensions = to_int(v, at);
    else if (key == "solver") {
      const std::string m = boost::algorithm::to_lower_copy(v);
      if (m == "modal") c.solver = SolverRoute::modal;
      else if (m == "dense") c.solver = SolverRoute::dense;
      else throw ConfigurationError(at + ": expected modal or dense, got '" + v + "'");
    }
  } else if (section == "output") {
    if (key == "directory") c.output_directory = v;
  }
}

void check_known(const std::string& section, const std::string& key) {
  const auto& keys = known_keys();
  const auto it = keys.find(section);
  if (it == keys.end()) throw ConfigurationError("unknown config section [" + section + "]");
  if (!it->second.count(key)) throw ConfigurationError("unknown config key " + where(section, key));
}

// Relative material files resolve against `base`, the config file's directory.
RunConfig from_tree(const pt::ptree& tree, const std::vector<ConfigOverride>& overrides,
                    const std::filesystem::path& base = {}) {
  RunConfig c;
  bool ny_given = false;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigurationError("config key '" + section + "' appears outside a section");
    }
    for (const auto& [key, value] : body) {
      check_known(section, key);
      apply(c, section, key, value.data());
      ny_given = ny_given || (section == "mesh" && key == "ny");
    }
  }
  for (const auto& o : overrides) {
    const auto dot = o.key.find('.');
    const std::string section = o.key.substr(0, dot), key = o.key.substr(dot + 1);
    check_known(section, key);
    apply(c, section, key, o.value);
    ny_given = ny_given || (section == "mesh" && key == "ny");
  }
  if (!ny_given) c.ny = c.nx;
  if (c.material_file && c.material_file->is_relative() && !base.empty()) c.material_file = base / *c.material_file;
  c.validate();
  return c;
}

}  // namespace

ConfigOverride parse_override(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ConfigurationError("override '" + text + "' is not of the form section.key=value");
  ConfigOverride o{boost::algorithm::trim_copy(text.substr(0, eq)), text.substr(eq + 1)};
  const auto dot = o.key.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == o.key.size()) {
    throw ConfigurationError("override key '" + o.key + "' is not of the form section.key");
  }
  check_known(o.key.substr(0, dot), o.key.substr(dot + 1));
  return o;
}

void RunConfig::validate() const {
  auto require = [](bool ok, const std::string& message) {
    if (!ok) throw ConfigurationError(message);
  };
  require(a > 0.0, "geometry.a must be positive");
  require(!aspect_ratio.empty() && !thickness_ratio.empty() && !skew_deg.empty() && !cutout_ratio.empty(),
          "geometry lists must not be empty");
  for (double v : aspect_ratio) require(v > 0.0, "geometry.aspect_ratio entries must be positive");
  for (double v : thickness_ratio) require(v > 0.0, "geometry.thickness_ratio entries must be positive");
  for (double v : skew_deg) require(std::abs(v) < 90.0, "geometry.skew_deg entries must lie in (-90, 90)");
  for (double r : cutout_ratio) {
    require(r >= 0.0, "geometry.cutout_ratio entries must be non-negative");
    for (double ab : aspect_ratio) {
      require(r == 0.0 || r < 0.5 * std::min(1.0, 1.0 / ab), "geometry.cutout_ratio leaves no material around the hole");
    }
  }
  require(!gradient_index.empty(), "material.gradient_index must not be empty");
  for (double n : gradient_index) require(n >= 0.0, "material.gradient_index entries must be non-negative");
  require(!temperatures.empty(), "material.temperatures must not be empty");
  for (const auto& [tc, tm] : temperatures) require(tc > 0.0 && tm > 0.0, "material temperatures must be positive kelvin");
  require(reference_temperature > 0.0, "material.reference_temperature must be positive");
  require(!shear_correction || *shear_correction > 0.0, "material.shear_correction must be positive");
  require(nu > 0.0 && nu < 0.5, "material.nu must lie in (0, 0.5)");
  require(quadrature_points >= 10, "material.quadrature_points must be at least 10");
  require(!bc.empty(), "analysis.bc must not be empty");
  require(!damping.empty(), "analysis.damping must not be empty");
  for (double g : damping) require(g >= 0.0, "analysis.damping entries must be non-negative");
  require(nx >= 1 && ny >= 1, "mesh.nx and mesh.ny must be at least 1");
  require(cutout_refinement >= 1, "mesh.cutout_refinement must be at least 1");
  require(shear_stabilization >= 0.0, "mesh.shear_stabilization must be non-negative");
  require(lambda_start >= 0.0 && lambda_end > lambda_start, "sweep range must satisfy 0 <= lambda_start < lambda_end");
  require(steps >= 1, "sweep.steps must be at least 1");
  require(modes_tracked >= 2, "sweep.modes_tracked must be at least 2");
  require(basis_modes >= modes_tracked, "sweep.basis_modes must be at least sweep.modes_tracked");
  require(coalescence_tol > 0.0 && coalescence_tol < 1.0, "sweep.coalescence_tol must lie in (0, 1)");
  require(bisection_tol > 0.0 && bisection_tol < 1.0, "sweep.bisection_tol must lie in (0, 1)");
  require(extensions >= 0, "sweep.extensions must be non-negative");

  std::map<std::string, Constituent> user;
  if (material_file) user = load_materials_file(*material_file);
  find_material(ceramic, user);
  find_material(metal, user);
}

namespace {

pt::ptree read_tree(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigurationError(std::string("config: ") + e.what());
  }
  return tree;
}

}  // namespace

RunConfig parse_run_config(std::istream& in, const std::vector<ConfigOverride>& overrides) {
  return from_tree(read_tree(in), overrides);
}

RunConfig load_run_config(const std::filesystem::path& path, const std::vector<ConfigOverride>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open config file " + path.string());
  const std::filesystem::path dir = path.parent_path();
  return from_tree(read_tree(in), overrides, std::filesystem::absolute(dir.empty() ? std::filesystem::path(".") : dir));
}

RunConfig default_run_config(const std::vector<ConfigOverride>& overrides) {
  return from_tree(pt::ptree{}, overrides);
}

namespace {

template <typename T, typename F>
std::string join(const std::vector<T>& items, F format) {
  std::ostringstream out;
  for (std::size_t i = 0; i < items.size(); ++i) out << (i ? ", " : "") << format(items[i]);
  return out.str();
}

// Shortest text that parses back to the same double.
std::string number(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace

void write_run_config(std::ostream& out, const RunConfig& c) {
  out << "[geometry]\n"
      << "a = " << number(c.a) << '\n'
      << "aspect_ratio = " << join(c.aspect_ratio, number) << '\n'
      << "thickness_ratio = " << join(c.thickness_ratio, number) << '\n'
      << "skew_deg = " << join(c.skew_deg, number) << '\n'
      << "cutout_ratio = " << join(c.cutout_ratio, number) << "\n\n";
  out << "[material]\n"
      << "ceramic = " << c.ceramic << '\n'
      << "metal = " << c.metal << '\n';
  if (c.material_file) out << "file = " << c.material_file->string() << '\n';
  out << "gradient_index = " << join(c.gradient_index, number) << '\n'
      << "temperatures = "
      << join(c.temperatures, [](const auto& t) { return number(t.first) + "/" + number(t.second); }) << '\n'
      << "reference_temperature = " << number(c.reference_temperature) << '\n';
  if (c.shear_correction) out << "shear_correction = " << number(*c.shear_correction) << '\n';
  out << "nu = " << number(c.nu) << '\n'
      << "poisson_mode = " << (c.poisson_mode == PoissonMode::constant ? "constant" : "mori_tanaka") << '\n'
      << "quadrature_points = " << c.quadrature_points << "\n\n";
  out << "[analysis]\n"
      << "bc = " << join(c.bc, [](BoundaryCondition bc) { return std::string(to_string(bc)); }) << '\n'
      << "normalization = " << to_string(c.normalization) << '\n'
      << "damping = " << join(c.damping, number) << '\n'
      << "flow_angle_deg = " << number(c.flow_angle_deg) << "\n\n";
  out << "[mesh]\n"
      << "nx = " << c.nx << '\n'
      << "ny = " << c.ny << '\n'
      << "pattern = " << (c.pattern == SplitPattern::diagonal ? "diagonal" : "union_jack") << '\n'
      << "cutout_refinement = " << c.cutout_refinement << '\n'
      << "shear_stabilization = " << number(c.shear_stabilization) << "\n\n";
  out << "[sweep]\n"
      << "lambda_start = " << number(c.lambda_start) << '\n'
      << "lambda_end = " << number(c.lambda_end) << '\n'
      << "steps = " << c.steps << '\n'
      << "modes_tracked = " << c.modes_tracked << '\n'
      << "basis_modes = " << c.basis_modes << '\n'
      << "coalescence_tol = " << number(c.coalescence_tol) << '\n'
      << "bisection_tol = " << number(c.bisection_tol) << '\n'
      << "extensions = " << c.extensions << '\n'
      << "solver = " << (c.solver == SolverRoute::modal ? "modal" : "dense") << "\n\n";
  out << "[output]\n"
      << "directory = " << c.output_directory.string() << '\n';
}

}  // namespace fgflutter
