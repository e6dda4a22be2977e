#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace fgflutter {

/// Boundary classification bits carried per node.
enum BoundaryTag : std::uint8_t {
  kEdgeX0 = 1u << 0,  // x = 0 (oblique after skewing)
  kEdgeXa = 1u << 1,  // x = a (oblique after skewing)
  kEdgeY0 = 1u << 2,  // y = 0
  kEdgeYb = 1u << 3,  // y = b
  kHole = 1u << 4,    // cutout rim, always free
};

constexpr std::uint8_t kOuterEdgeMask = kEdgeX0 | kEdgeXa | kEdgeY0 | kEdgeYb;
constexpr std::uint8_t kObliqueEdgeMask = kEdgeX0 | kEdgeXa;

struct PlateGeometry {
  double a = 0.0;
  double b = 0.0;
  std::optional<double> cutout_radius;
};

struct TriMesh {
  std::vector<Eigen::Vector2d> nodes;
  std::vector<std::array<int, 3>> triangles;  // counter-clockwise
  std::vector<std::uint8_t> tags;             // one BoundaryTag mask per node
  double skew_angle = 0.0;                    // radians
  PlateGeometry geometry;

  std::size_t node_count() const { return nodes.size(); }
  std::size_t triangle_count() const { return triangles.size(); }
};

enum class SplitPattern {
  diagonal,    // every cell cut from lower-left to upper-right
  union_jack,  // alternating diagonals
};

/// Uniform nx-by-ny grid on [0, a] x [0, b], each cell split into two triangles.
TriMesh structured_rect_mesh(double a, double b, int nx, int ny,
                             SplitPattern pattern = SplitPattern::diagonal);

/// Shears the mesh so x = const edges lean by psi from the y axis:
/// (x, y) -> (x + y sin psi, y cos psi). Edges y = const stay horizontal.
TriMesh apply_skew(TriMesh mesh, double psi);

/// Rectangle minus a centred disk of radius r, meshed as an O-grid of
/// graded rings between the hole polygon and the outer rectangle. The hole
/// polygon has 32 * refinement segments.
TriMesh cutout_mesh(double a, double b, double r, int refinement);

/// Five DOFs (u, v, w, theta_x, theta_y) per node, node-major.
struct DofMap {
  static constexpr int kDofsPerNode = 5;
  int node_count = 0;

  int size() const { return kDofsPerNode * node_count; }
  int index(int node, int local) const { return kDofsPerNode * node + local; }
};

DofMap dof_map(const TriMesh& mesh);

double signed_area(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2, const Eigen::Vector2d& p3);
double triangle_area(const TriMesh& mesh, std::size_t t);
double total_area(const TriMesh& mesh);

/// Inradius over circumradius, scaled so an equilateral triangle scores 1.
double triangle_quality(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2, const Eigen::Vector2d& p3);
double min_quality(const TriMesh& mesh);

/// Every interior edge shared by exactly two triangles with opposite
/// orientation, every other edge used once, all signed areas positive.
bool is_conforming(const TriMesh& mesh);

/// Plain-text mesh exchange format:
///
///   fgflutter-mesh 1
///   nodes <N> triangles <T> a <a> b <b> r <r|none> psi <psi>
///   node <id> <x> <y> <tags>      (tags: comma list of x0,xa,y0,yb,hole or '-')
///   tri <id> <n1> <n2> <n3>
///
/// Ids are zero-based; reals are written with 17 significant digits.
void write_mesh(std::ostream& out, const TriMesh& mesh);
TriMesh read_mesh(std::istream& in);

}  // namespace fgflutter
