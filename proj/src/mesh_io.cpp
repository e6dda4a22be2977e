#include "fgflutter/error.hpp"
#include "fgflutter/mesh.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace fgflutter {

namespace {

constexpr std::array<std::pair<std::uint8_t, const char*>, 5> kTagNames = {{
    {kEdgeX0, "x0"}, {kEdgeXa, "xa"}, {kEdgeY0, "y0"}, {kEdgeYb, "yb"}, {kHole, "hole"}}};

std::string format_tags(std::uint8_t tags) {
  std::string out;
  for (const auto& [bit, name] : kTagNames) {
    if (!(tags & bit)) continue;
    if (!out.empty()) out += ',';
    out += name;
  }
  return out.empty() ? "-" : out;
}

std::uint8_t parse_tags(const std::string& text) {
  if (text == "-") return 0;
  std::uint8_t tags = 0;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    bool known = false;
    for (const auto& [bit, name] : kTagNames) {
      if (item == name) {
        tags |= bit;
        known = true;
      }
    }
    if (!known) throw ConfigurationError("mesh file: unknown boundary tag '" + item + "'");
  }
  return tags;
}

template <typename T>
T expect(std::istream& in, const char* what) {
  T value;
  if (!(in >> value)) throw ConfigurationError(std::string("mesh file: cannot read ") + what);
  return value;
}

void expect_word(std::istream& in, const std::string& word) {
  const auto got = expect<std::string>(in, word.c_str());
  if (got != word) throw ConfigurationError("mesh file: expected '" + word + "', found '" + got + "'");
}

}  // namespace

void write_mesh(std::ostream& out, const TriMesh& mesh) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(17);
  out << "fgflutter-mesh 1\n";
  out << "nodes " << mesh.nodes.size() << " triangles " << mesh.triangles.size() << " a "
      << mesh.geometry.a << " b " << mesh.geometry.b << " r ";
  if (mesh.geometry.cutout_radius) {
    out << *mesh.geometry.cutout_radius;
  } else {
    out << "none";
  }
  out << " psi " << mesh.skew_angle << '\n';
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
    out << "node " << i << ' ' << mesh.nodes[i].x() << ' ' << mesh.nodes[i].y() << ' '
        << format_tags(mesh.tags[i]) << '\n';
  }
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    out << "tri " << t << ' ' << tri[0] << ' ' << tri[1] << ' ' << tri[2] << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

TriMesh read_mesh(std::istream& in) {
  expect_word(in, "fgflutter-mesh");
  if (expect<int>(in, "version") != 1) throw ConfigurationError("mesh file: unsupported version");
  TriMesh mesh;
  expect_word(in, "nodes");
  const auto n_nodes = expect<std::size_t>(in, "node count");
  expect_word(in, "triangles");
  const auto n_tris = expect<std::size_t>(in, "triangle count");
  expect_word(in, "a");
  mesh.geometry.a = expect<double>(in, "a");
  expect_word(in, "b");
  mesh.geometry.b = expect<double>(in, "b");
  expect_word(in, "r");
  const auto r = expect<std::string>(in, "r");
  if (r != "none") mesh.geometry.cutout_radius = std::stod(r);
  expect_word(in, "psi");
  mesh.skew_angle = expect<double>(in, "psi");

  mesh.nodes.resize(n_nodes);
  mesh.tags.resize(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    expect_word(in, "node");
    const auto id = expect<std::size_t>(in, "node id");
    if (id != i) throw ConfigurationError("mesh file: node ids must be consecutive from 0");
    const double x = expect<double>(in, "x");
    const double y = expect<double>(in, "y");
    mesh.nodes[i] = Eigen::Vector2d(x, y);
    mesh.tags[i] = parse_tags(expect<std::string>(in, "tags"));
  }
  mesh.triangles.resize(n_tris);
  for (std::size_t t = 0; t < n_tris; ++t) {
    expect_word(in, "tri");
    const auto id = expect<std::size_t>(in, "triangle id");
    if (id != t) throw ConfigurationError("mesh file: triangle ids must be consecutive from 0");
    for (int k = 0; k < 3; ++k) {
      const int n = expect<int>(in, "triangle node");
      if (n < 0 || static_cast<std::size_t>(n) >= n_nodes) {
        throw ConfigurationError("mesh file: triangle references a missing node");
      }
      mesh.triangles[t][k] = n;
    }
  }
  return mesh;
}

}  // namespace fgflutter
