#include "fgflutter/material_io.hpp"

#include "fgflutter/error.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <fstream>

namespace fgflutter {

namespace {

Constituent make_si3n4() {
  Constituent c;
  c.name = "Si3N4";
  c.E = {348.43e9, 0.0, -3.070e-4, 2.160e-7, -8.946e-11};
  c.alpha = {5.8723e-6, 0.0, 9.095e-4, 0.0, 0.0};
  c.rho = 2370.0;
  c.kappa = 9.19;
  c.nu = 0.28;
  return c;
}

Constituent make_sus304() {
  Constituent c;
  c.name = "SUS304";
  c.E = {201.04e9, 0.0, 3.079e-4, -6.534e-7, 0.0};
  c.alpha = {12.330e-6, 0.0, 8.086e-4, 0.0, 0.0};
  c.rho = 8166.0;
  c.kappa = 12.04;
  c.nu = 0.28;
  return c;
}

Constituent make_aluminium() {
  Constituent c;
  c.name = "Aluminium";
  c.E = TemperatureCoefficients::constant(70.0e9);
  c.alpha = TemperatureCoefficients::constant(23.0e-6);
  c.rho = 2707.0;
  c.kappa = 204.0;
  c.nu = 0.3;
  return c;
}

TemperatureCoefficients parse_coefficients(const std::string& text, const std::string& where) {
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(", \t"), boost::token_compress_on);
  std::vector<double> values;
  for (auto& p : parts) {
    boost::trim(p);
    if (p.empty()) continue;
    try {
      std::size_t used = 0;
      values.push_back(std::stod(p, &used));
      if (used != p.size()) throw std::invalid_argument(p);
    } catch (const std::exception&) {
      throw ConfigurationError(where + ": cannot parse number '" + p + "'");
    }
  }
  if (values.size() == 1) return TemperatureCoefficients::constant(values[0]);
  if (values.size() != 5) {
    throw ConfigurationError(where + ": expected 1 or 5 coefficients (P0, Pm1, P1, P2, P3)");
  }
  return {values[0], values[1], values[2], values[3], values[4]};
}

double parse_scalar(const boost::property_tree::ptree& node, const std::string& key,
                    const std::string& where) {
  const auto value = node.get_optional<std::string>(key);
  if (!value) throw ConfigurationError(where + ": missing key '" + key + "'");
  try {
    std::size_t used = 0;
    const std::string s = boost::trim_copy(*value);
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigurationError(where + ": cannot parse '" + key + "'");
  }
}

}  // namespace

Constituent builtin_material(std::string_view name) {
  if (name == "Si3N4") return make_si3n4();
  if (name == "SUS304") return make_sus304();
  if (name == "Aluminium") return make_aluminium();
  throw ConfigurationError("unknown material '" + std::string(name) + "'");
}

std::vector<std::string> builtin_material_names() { return {"Si3N4", "SUS304", "Aluminium"}; }

ConstituentSet si3n4_sus304() { return {make_si3n4(), make_sus304()}; }

std::map<std::string, Constituent> load_materials(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigurationError(std::string("material file: ") + e.what());
  }
  std::map<std::string, Constituent> out;
  for (const auto& [name, node] : tree) {
    if (node.empty()) throw ConfigurationError("material file: '" + name + "' is not a [section]");
    const std::string where = "material '" + name + "'";
    Constituent c;
    c.name = name;
    const auto E = node.get_optional<std::string>("E");
    const auto alpha = node.get_optional<std::string>("alpha");
    if (!E) throw ConfigurationError(where + ": missing key 'E'");
    if (!alpha) throw ConfigurationError(where + ": missing key 'alpha'");
    c.E = parse_coefficients(*E, where + " E");
    c.alpha = parse_coefficients(*alpha, where + " alpha");
    c.rho = parse_scalar(node, "rho", where);
    c.kappa = parse_scalar(node, "kappa", where);
    c.nu = parse_scalar(node, "nu", where);
    c.validate();
    out.emplace(name, std::move(c));
  }
  return out;
}

std::map<std::string, Constituent> load_materials_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open material file " + path.string());
  return load_materials(in);
}

Constituent find_material(std::string_view name, const std::map<std::string, Constituent>& user) {
  if (auto it = user.find(std::string(name)); it != user.end()) return it->second;
  return builtin_material(name);
}

}  // namespace fgflutter
