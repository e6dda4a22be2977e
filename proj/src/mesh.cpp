#include "fgflutter/mesh.hpp"

#include "fgflutter/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace fgflutter {

namespace {

std::uint8_t rectangle_tags(double x, double y, double a, double b) {
  const double tol = 1e-10 * std::max(a, b);
  std::uint8_t tag = 0;
  if (std::abs(x) <= tol) tag |= kEdgeX0;
  if (std::abs(x - a) <= tol) tag |= kEdgeXa;
  if (std::abs(y) <= tol) tag |= kEdgeY0;
  if (std::abs(y - b) <= tol) tag |= kEdgeYb;
  return tag;
}

void push_ccw(TriMesh& mesh, int n1, int n2, int n3) {
  if (signed_area(mesh.nodes[n1], mesh.nodes[n2], mesh.nodes[n3]) < 0.0) std::swap(n2, n3);
  mesh.triangles.push_back({n1, n2, n3});
}

}  // namespace

double signed_area(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2, const Eigen::Vector2d& p3) {
  return 0.5 * ((p2.x() - p1.x()) * (p3.y() - p1.y()) - (p3.x() - p1.x()) * (p2.y() - p1.y()));
}

double triangle_area(const TriMesh& mesh, std::size_t t) {
  const auto& tri = mesh.triangles[t];
  return signed_area(mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]);
}

double total_area(const TriMesh& mesh) {
  double sum = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) sum += triangle_area(mesh, t);
  return sum;
}

TriMesh structured_rect_mesh(double a, double b, int nx, int ny, SplitPattern pattern) {
  if (!(a > 0.0 && b > 0.0)) throw ConfigurationError("plate dimensions must be positive");
  if (nx < 1 || ny < 1) throw ConfigurationError("mesh divisions must be at least 1");

  TriMesh mesh;
  mesh.geometry = {a, b, std::nullopt};
  mesh.nodes.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      // Boundary rows and columns are placed exactly so tags never depend on rounding.
      const double x = (i == nx) ? a : a * i / nx;
      const double y = (j == ny) ? b : b * j / ny;
      mesh.nodes.emplace_back(x, y);
      mesh.tags.push_back(rectangle_tags(x, y, a, b));
    }
  }
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  mesh.triangles.reserve(2 * static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int n00 = id(i, j), n10 = id(i + 1, j), n11 = id(i + 1, j + 1), n01 = id(i, j + 1);
      const bool rising = pattern == SplitPattern::diagonal || (i + j) % 2 == 0;
      if (rising) {
        mesh.triangles.push_back({n00, n10, n11});
        mesh.triangles.push_back({n00, n11, n01});
      } else {
        mesh.triangles.push_back({n00, n10, n01});
        mesh.triangles.push_back({n10, n11, n01});
      }
    }
  }
  return mesh;
}

TriMesh apply_skew(TriMesh mesh, double psi) {
  if (!(std::abs(psi) < 0.5 * std::numbers::pi)) {
    throw ConfigurationError("skew angle must satisfy |psi| < 90 degrees");
  }
  if (psi == 0.0) return mesh;
  const double s = std::sin(psi), c = std::cos(psi);
  for (auto& p : mesh.nodes) p = Eigen::Vector2d(p.x() + p.y() * s, p.y() * c);
  mesh.skew_angle = psi;
  return mesh;
}

TriMesh cutout_mesh(double a, double b, double r, int refinement) {
  if (!(a > 0.0 && b > 0.0)) throw ConfigurationError("plate dimensions must be positive");
  if (!(r > 0.0 && r < 0.5 * std::min(a, b))) {
    throw ConfigurationError("cutout radius must satisfy 0 < r < min(a, b) / 2");
  }
  if (refinement < 1) throw ConfigurationError("cutout refinement must be at least 1");

  const int per_side = 8 * refinement;
  const int ring_size = 4 * per_side;
  const Eigen::Vector2d centre(0.5 * a, 0.5 * b);

  // Outer perimeter, counter-clockwise from (0, 0), with the hole angle of
  // each perimeter point spread uniformly between the sector corner angles.
  const std::array<Eigen::Vector2d, 5> corners = {
      Eigen::Vector2d(0, 0), Eigen::Vector2d(a, 0), Eigen::Vector2d(a, b), Eigen::Vector2d(0, b),
      Eigen::Vector2d(0, 0)};
  const double phi = std::atan2(b, a);
  const std::array<double, 5> corner_angles = {-std::numbers::pi + phi, -phi, phi,
                                               std::numbers::pi - phi, std::numbers::pi + phi};
  std::vector<Eigen::Vector2d> outer(ring_size), inner(ring_size);
  for (int side = 0; side < 4; ++side) {
    for (int k = 0; k < per_side; ++k) {
      const double t = static_cast<double>(k) / per_side;
      outer[side * per_side + k] = corners[side] + t * (corners[side + 1] - corners[side]);
      const double angle = corner_angles[side] + t * (corner_angles[side + 1] - corner_angles[side]);
      inner[side * per_side + k] = centre + r * Eigen::Vector2d(std::cos(angle), std::sin(angle));
    }
  }

  // Ring count from the mean radial gap; geometric grading makes the first
  // ring roughly as deep as the hole segments are long.
  const double element = std::min(a, b) / per_side;
  const double mid_gap = 0.5 * std::min(a, b) - r;
  const double corner_gap = 0.5 * std::hypot(a, b) - r;
  const int rings = std::max(2, static_cast<int>(std::ceil(0.5 * (mid_gap + corner_gap) / element)));
  const double hole_segment = 2.0 * std::numbers::pi * r / ring_size;
  double ratio = 1.0;
  if (hole_segment < mid_gap / rings) {
    auto first_fraction = [rings](double q) { return (q - 1.0) / (std::pow(q, rings) - 1.0); };
    const double target = hole_segment / mid_gap;
    double lo = 1.0 + 1e-12, hi = 4.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (first_fraction(mid) > target ? lo : hi) = mid;
    }
    ratio = 0.5 * (lo + hi);
  }
  std::vector<double> t(rings + 1);
  for (int k = 0; k <= rings; ++k) {
    t[k] = ratio == 1.0 ? static_cast<double>(k) / rings
                        : (std::pow(ratio, k) - 1.0) / (std::pow(ratio, rings) - 1.0);
  }
  t[rings] = 1.0;

  TriMesh mesh;
  mesh.geometry = {a, b, r};
  mesh.nodes.reserve(static_cast<std::size_t>(rings + 1) * ring_size);
  for (int k = 0; k <= rings; ++k) {
    for (int i = 0; i < ring_size; ++i) {
      const Eigen::Vector2d p = k == rings ? outer[i] : inner[i] + t[k] * (outer[i] - inner[i]);
      mesh.nodes.push_back(p);
      std::uint8_t tag = 0;
      if (k == 0) tag = kHole;
      if (k == rings) tag = rectangle_tags(p.x(), p.y(), a, b);
      mesh.tags.push_back(tag);
    }
  }
  auto id = [ring_size](int i, int k) { return k * ring_size + (i % ring_size); };
  for (int k = 0; k < rings; ++k) {
    for (int i = 0; i < ring_size; ++i) {
      const int p00 = id(i, k), p10 = id(i + 1, k), p11 = id(i + 1, k + 1), p01 = id(i, k + 1);
      // Cut along the shorter diagonal.
      const double d1 = (mesh.nodes[p00] - mesh.nodes[p11]).squaredNorm();
      const double d2 = (mesh.nodes[p10] - mesh.nodes[p01]).squaredNorm();
      if (d1 <= d2) {
        push_ccw(mesh, p00, p10, p11);
        push_ccw(mesh, p00, p11, p01);
      } else {
        push_ccw(mesh, p00, p10, p01);
        push_ccw(mesh, p10, p11, p01);
      }
    }
  }
  return mesh;
}

DofMap dof_map(const TriMesh& mesh) { return DofMap{static_cast<int>(mesh.nodes.size())}; }

double triangle_quality(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2, const Eigen::Vector2d& p3) {
  const double la = (p2 - p3).norm(), lb = (p3 - p1).norm(), lc = (p1 - p2).norm();
  const double area = std::abs(signed_area(p1, p2, p3));
  if (area == 0.0) return 0.0;
  const double s = 0.5 * (la + lb + lc);
  const double inradius = area / s;
  const double circumradius = la * lb * lc / (4.0 * area);
  return 2.0 * inradius / circumradius;
}

double min_quality(const TriMesh& mesh) {
  double q = 1.0;
  for (const auto& tri : mesh.triangles) {
    q = std::min(q, triangle_quality(mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]));
  }
  return q;
}

bool is_conforming(const TriMesh& mesh) {
  // Directed edge -> use count; an interior edge must appear once in each direction.
  std::map<std::pair<int, int>, int> directed;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    if (!(triangle_area(mesh, t) > 0.0)) return false;
    const auto& tri = mesh.triangles[t];
    for (int e = 0; e < 3; ++e) {
      if (++directed[{tri[e], tri[(e + 1) % 3]}] > 1) return false;
    }
  }
  // An edge used once with no twin must lie on a tagged boundary.
  for (const auto& [edge, count] : directed) {
    if (directed.count({edge.second, edge.first})) continue;
    const std::uint8_t common = mesh.tags[edge.first] & mesh.tags[edge.second];
    if (common == 0) return false;
  }
  return true;
}

}  // namespace fgflutter
