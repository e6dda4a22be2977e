#pragma once

#include "fgflutter/material.hpp"

#include <Eigen/Dense>

#include <array>

namespace fgflutter {

using Matrix3x15 = Eigen::Matrix<double, 3, 15>;
using Matrix2x15 = Eigen::Matrix<double, 2, 15>;
using Matrix15 = Eigen::Matrix<double, 15, 15>;
using Vector15 = Eigen::Matrix<double, 15, 1>;

/// Local DOF slots inside a node block.
enum Dof : int { kU = 0, kV = 1, kW = 2, kThetaX = 3, kThetaY = 4 };

struct ElementGeometry {
  std::array<Eigen::Vector2d, 3> nodes;
  Eigen::Vector2d center;
  std::array<double, 3> sub_areas;  // (O,1,2), (O,2,3), (O,3,1)
  double area = 0.0;

  /// Throws NumericError for a degenerate or clockwise triangle.
  static ElementGeometry from_nodes(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2,
                                    const Eigen::Vector2d& p3);
};

/// Strain-displacement operators acting on 15 DOFs, (u, v, w, theta_x, theta_y) per node.
struct StrainOperators {
  Matrix3x15 Bp = Matrix3x15::Zero();  // membrane (u_x, v_y, u_y + v_x)
  Matrix3x15 Bb = Matrix3x15::Zero();  // bending (theta_x,x, theta_y,y, theta_x,y + theta_y,x)
  Matrix2x15 Bs = Matrix2x15::Zero();  // transverse shear (theta_x + w_x, theta_y + w_y)
};

/// DSG3 operators of a single triangle whose first node anchors the shear gaps.
StrainOperators dsg3_operators(const std::array<Eigen::Vector2d, 3>& coords);

/// Cell-smoothed operators: DSG3 on the three centroid subtriangles, centre
/// DOFs replaced by the nodal average, then area-averaged over the element.
StrainOperators cs_smooth(const ElementGeometry& geom);

/// Smoothed stiffness (Bp' A Bp + Bp' B Bb + Bb' B Bp + Bb' Db Bb + c Bs' E Bs) * area,
/// with c = `shear_scale`.
Matrix15 element_stiffness(const StrainOperators& ops, const SectionProperties& sec, double area,
                           double shear_scale = 1.0);

/// Default alpha of the shear stabilization below.
inline constexpr double kDefaultShearStabilization = 0.1;

/// Shear rigidity factor t^2 / (t^2 + alpha h_e^2), h_e the longest edge.
double shear_stabilization_factor(const ElementGeometry& geom, double thickness, double alpha);

/// Consistent mass of the linear triangle: p on u, v, w and I on the rotations.
Matrix15 element_mass(const ElementGeometry& geom, const SectionProperties& sec);

/// Geometric stiffness of the in-plane resultants {Nxx, Nyy, Nxy} acting on
/// w gradients and, with weight h^2/12, on rotation gradients. Compressive
/// resultants are negative.
Matrix15 element_geometric_stiffness(const ElementGeometry& geom, const Eigen::Vector3d& inplane,
                                     double h);

/// Piston-theory slope operator: integral of N_w^T (cos t dN_w/dx + sin t dN_w/dy).
Matrix15 element_aero(const ElementGeometry& geom, double flow_angle);

/// Unit-density transverse mass; carries the aerodynamic damping.
Matrix15 element_aero_damping(const ElementGeometry& geom);

/// Gradients of the linear shape functions, rows (d/dx, d/dy).
Eigen::Matrix<double, 2, 3> shape_gradients(const ElementGeometry& geom);

struct ElementMatrices {
  Matrix15 K;
  Matrix15 M;
  Matrix15 KG;
  Matrix15 A;
  Matrix15 DA;
};

/// All element matrices. `prestress` is the in-plane resultant driving KG.
/// `shear_stabilization` is alpha; zero gives the plain DSG3 shear term.
ElementMatrices element_matrices(const ElementGeometry& geom, const SectionProperties& sec,
                                 const Eigen::Vector3d& prestress, double flow_angle,
                                 double shear_stabilization = kDefaultShearStabilization);

}  // namespace fgflutter
