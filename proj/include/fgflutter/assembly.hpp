#pragma once

#include "fgflutter/element.hpp"
#include "fgflutter/mesh.hpp"

#include <Eigen/Sparse>

#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace fgflutter {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

enum class BoundaryCondition { SSSS, CCCC, free };

/// Parses "SSSS", "CCCC" or "FREE" (case-insensitive). Throws ConfigurationError otherwise.
BoundaryCondition parse_boundary_condition(std::string_view text);
std::string_view to_string(BoundaryCondition bc);

/// Matrices of M q'' + g D_A q' + (K + K_G + lambda A) q = 0.
struct GlobalSystem {
  SparseMatrix K;
  SparseMatrix KG;
  SparseMatrix M;
  SparseMatrix A;
  SparseMatrix DA;
  /// Full-model DOF index of every retained row; identity before reduction.
  std::vector<int> free_dofs;
  /// Nodes whose DOFs are expressed in the rotated edge frame.
  std::vector<int> skew_nodes;
  double skew_angle = 0.0;
  int full_size = 0;

  int size() const { return static_cast<int>(K.rows()); }
};

/// Scatter-adds per-element matrices (one per mesh triangle, in order).
GlobalSystem assemble(const TriMesh& mesh, std::span<const ElementMatrices> elements);

/// Element matrices for every triangle of the mesh; `prestress` drives K_G.
std::vector<ElementMatrices> plate_element_matrices(const TriMesh& mesh, const SectionProperties& sec,
                                                    const Eigen::Vector3d& prestress,
                                                    double flow_angle, int workers = 1,
                                                    double shear_stabilization = kDefaultShearStabilization);

/// Nodal frame rotation delta = L_g delta' for an oblique edge node.
Eigen::Matrix<double, 5, 5> skew_transformation(double psi);

/// Rotates the DOFs of every node on an oblique (x = 0 or x = a) edge into
/// the edge frame by the congruence T' X T. A no-op when the mesh is not skewed.
GlobalSystem apply_skew_transform(GlobalSystem system, const TriMesh& mesh);

/// Constrained full-model DOFs for the given support type.
std::vector<int> constrained_dofs(const TriMesh& mesh, BoundaryCondition bc);

/// Deletes constrained rows and columns.
GlobalSystem apply_bc(const GlobalSystem& system, const TriMesh& mesh, BoundaryCondition bc);

/// Coordinate dump "row col value", zero-based, one nonzero per line with a
/// leading "% rows cols nnz" header.
void write_coordinate(std::ostream& out, const SparseMatrix& matrix);

}  // namespace fgflutter
