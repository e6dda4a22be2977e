#include "fgflutter/assembly.hpp"

#include "fgflutter/error.hpp"

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <ostream>
#include <string>
#include <thread>

namespace fgflutter {

BoundaryCondition parse_boundary_condition(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
  if (upper == "SSSS") return BoundaryCondition::SSSS;
  if (upper == "CCCC") return BoundaryCondition::CCCC;
  if (upper == "FREE") return BoundaryCondition::free;
  throw ConfigurationError("unknown boundary condition '" + std::string(text) + "'");
}

std::string_view to_string(BoundaryCondition bc) {
  switch (bc) {
    case BoundaryCondition::SSSS: return "SSSS";
    case BoundaryCondition::CCCC: return "CCCC";
    case BoundaryCondition::free: return "FREE";
  }
  return "?";
}

namespace {

SparseMatrix scatter(const TriMesh& mesh, std::span<const ElementMatrices> elements, int n,
                     Matrix15 ElementMatrices::*member) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(elements.size() * 225);
  for (std::size_t e = 0; e < elements.size(); ++e) {
    const auto& tri = mesh.triangles[e];
    const Matrix15& local = elements[e].*member;
    for (int i = 0; i < 15; ++i) {
      const int gi = 5 * tri[i / 5] + i % 5;
      for (int j = 0; j < 15; ++j) {
        const double v = local(i, j);
        if (v != 0.0) triplets.emplace_back(gi, 5 * tri[j / 5] + j % 5, v);
      }
    }
  }
  SparseMatrix out(n, n);
  out.setFromTriplets(triplets.begin(), triplets.end());
  out.makeCompressed();
  return out;
}

}  // namespace

GlobalSystem assemble(const TriMesh& mesh, std::span<const ElementMatrices> elements) {
  if (elements.size() != mesh.triangles.size()) {
    throw std::logic_error("assemble: one element matrix set per triangle is required");
  }
  const int n = dof_map(mesh).size();
  for (const auto& tri : mesh.triangles) {
    for (int node : tri) {
      if (node < 0 || 5 * node + 4 >= n) throw std::out_of_range("assemble: node index out of range");
    }
  }
  GlobalSystem sys;
  sys.full_size = n;
  sys.K = scatter(mesh, elements, n, &ElementMatrices::K);
  sys.KG = scatter(mesh, elements, n, &ElementMatrices::KG);
  sys.M = scatter(mesh, elements, n, &ElementMatrices::M);
  sys.A = scatter(mesh, elements, n, &ElementMatrices::A);
  sys.DA = scatter(mesh, elements, n, &ElementMatrices::DA);
  sys.free_dofs.resize(n);
  for (int i = 0; i < n; ++i) sys.free_dofs[i] = i;
  return sys;
}

std::vector<ElementMatrices> plate_element_matrices(const TriMesh& mesh, const SectionProperties& sec,
                                                    const Eigen::Vector3d& prestress,
                                                    double flow_angle, int workers,
                                                    double shear_stabilization) {
  std::vector<ElementMatrices> out(mesh.triangles.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t e = begin; e < end; ++e) {
      const auto& tri = mesh.triangles[e];
      const auto geom = ElementGeometry::from_nodes(mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]);
      out[e] = element_matrices(geom, sec, prestress, flow_angle, shear_stabilization);
    }
  };
  const std::size_t count = out.size();
  workers = std::max(1, workers);
  if (workers == 1 || count < 256) {
    work(0, count);
    return out;
  }
  // Each worker owns a disjoint slice of the output, so no merging is needed here.
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(count, w * chunk), end = std::min(count, begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      try {
        work(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

Eigen::Matrix<double, 5, 5> skew_transformation(double psi) {
  const double c = std::cos(psi), s = std::sin(psi);
  Eigen::Matrix<double, 5, 5> L = Eigen::Matrix<double, 5, 5>::Zero();
  L(0, 0) = c;  L(0, 1) = s;
  L(1, 0) = -s; L(1, 1) = c;
  L(2, 2) = 1.0;
  L(3, 3) = c;  L(3, 4) = s;
  L(4, 3) = -s; L(4, 4) = c;
  return L;
}

GlobalSystem apply_skew_transform(GlobalSystem system, const TriMesh& mesh) {
  if (mesh.skew_angle == 0.0) return system;
  if (system.size() != system.full_size) {
    throw std::logic_error("skew transformation must precede boundary reduction");
  }
  const int n = system.full_size;
  const auto L = skew_transformation(mesh.skew_angle);
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<bool> rotated(mesh.nodes.size(), false);
  for (std::size_t node = 0; node < mesh.nodes.size(); ++node) {
    if (mesh.tags[node] & kObliqueEdgeMask) {
      rotated[node] = true;
      system.skew_nodes.push_back(static_cast<int>(node));
    }
  }
  for (std::size_t node = 0; node < mesh.nodes.size(); ++node) {
    const int base = 5 * static_cast<int>(node);
    for (int i = 0; i < 5; ++i) {
      if (!rotated[node]) {
        triplets.emplace_back(base + i, base + i, 1.0);
        continue;
      }
      for (int j = 0; j < 5; ++j) {
        if (L(i, j) != 0.0) triplets.emplace_back(base + i, base + j, L(i, j));
      }
    }
  }
  SparseMatrix T(n, n);
  T.setFromTriplets(triplets.begin(), triplets.end());
  const SparseMatrix Tt = T.transpose();
  auto congruence = [&](const SparseMatrix& X) -> SparseMatrix {
    SparseMatrix Y = (Tt * X * T).pruned();
    Y.makeCompressed();
    return Y;
  };
  system.K = congruence(system.K);
  system.KG = congruence(system.KG);
  system.M = congruence(system.M);
  system.A = congruence(system.A);
  system.DA = congruence(system.DA);
  system.skew_angle = mesh.skew_angle;
  return system;
}

std::vector<int> constrained_dofs(const TriMesh& mesh, BoundaryCondition bc) {
  std::vector<int> out;
  if (bc == BoundaryCondition::free) return out;
  for (std::size_t node = 0; node < mesh.nodes.size(); ++node) {
    const std::uint8_t tag = mesh.tags[node];
    if (!(tag & kOuterEdgeMask)) continue;
    bool fixed[5] = {false, false, false, false, false};
    if (bc == BoundaryCondition::CCCC) {
      std::fill(std::begin(fixed), std::end(fixed), true);
    } else {
      // x-type edges (oblique when skewed, in the edge frame): u, w, theta_y.
      if (tag & kObliqueEdgeMask) fixed[kU] = fixed[kW] = fixed[kThetaY] = true;
      // y-type edges: v, w, theta_x.
      if (tag & (kEdgeY0 | kEdgeYb)) fixed[kV] = fixed[kW] = fixed[kThetaX] = true;
    }
    for (int d = 0; d < 5; ++d) {
      if (fixed[d]) out.push_back(5 * static_cast<int>(node) + d);
    }
  }
  return out;
}

GlobalSystem apply_bc(const GlobalSystem& system, const TriMesh& mesh, BoundaryCondition bc) {
  if (system.size() != system.full_size) throw std::logic_error("system is already reduced");
  const int n = system.full_size;
  std::vector<bool> fixed(n, false);
  for (int d : constrained_dofs(mesh, bc)) fixed[d] = true;

  std::vector<int> reduced_index(n, -1);
  GlobalSystem out;
  out.full_size = n;
  out.skew_nodes = system.skew_nodes;
  out.skew_angle = system.skew_angle;
  for (int i = 0; i < n; ++i) {
    if (fixed[i]) continue;
    reduced_index[i] = static_cast<int>(out.free_dofs.size());
    out.free_dofs.push_back(i);
  }
  const int m = static_cast<int>(out.free_dofs.size());
  auto reduce = [&](const SparseMatrix& X) {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(X.nonZeros());
    for (int col = 0; col < X.outerSize(); ++col) {
      if (reduced_index[col] < 0) continue;
      for (SparseMatrix::InnerIterator it(X, col); it; ++it) {
        const int r = reduced_index[it.row()];
        if (r >= 0) triplets.emplace_back(r, reduced_index[col], it.value());
      }
    }
    SparseMatrix Y(m, m);
    Y.setFromTriplets(triplets.begin(), triplets.end());
    Y.makeCompressed();
    return Y;
  };
  out.K = reduce(system.K);
  out.KG = reduce(system.KG);
  out.M = reduce(system.M);
  out.A = reduce(system.A);
  out.DA = reduce(system.DA);
  return out;
}

void write_coordinate(std::ostream& out, const SparseMatrix& matrix) {
  const auto precision = out.precision();
  out << std::setprecision(17);
  out << "% " << matrix.rows() << ' ' << matrix.cols() << ' ' << matrix.nonZeros() << '\n';
  for (int col = 0; col < matrix.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(matrix, col); it; ++it) {
      out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    }
  }
  out.precision(precision);
}

}  // namespace fgflutter
