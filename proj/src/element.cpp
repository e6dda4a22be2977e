#include "fgflutter/element.hpp"

#include "fgflutter/error.hpp"
#include "fgflutter/mesh.hpp"

#include <algorithm>
#include <cmath>

namespace fgflutter {

ElementGeometry ElementGeometry::from_nodes(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2,
                                            const Eigen::Vector2d& p3) {
  ElementGeometry g;
  g.nodes = {p1, p2, p3};
  g.area = signed_area(p1, p2, p3);
  if (!(g.area > 0.0)) throw NumericError("element has non-positive signed area");
  g.center = (p1 + p2 + p3) / 3.0;
  for (int i = 0; i < 3; ++i) {
    g.sub_areas[i] = signed_area(g.center, g.nodes[i], g.nodes[(i + 1) % 3]);
  }
  return g;
}

StrainOperators dsg3_operators(const std::array<Eigen::Vector2d, 3>& x) {
  const double a = x[1].x() - x[0].x();
  const double b = x[1].y() - x[0].y();
  const double c = x[2].y() - x[0].y();
  const double d = x[2].x() - x[0].x();
  const double Ae = 0.5 * (a * c - b * d);
  if (!(Ae > 0.0)) throw NumericError("DSG3 triangle has non-positive area");

  StrainOperators op;
  // Node columns start at 0, 5 and 10.
  op.Bp(0, 0) = b - c;   op.Bp(0, 5) = c;    op.Bp(0, 10) = -b;
  op.Bp(1, 1) = d - a;   op.Bp(1, 6) = -d;   op.Bp(1, 11) = a;
  op.Bp(2, 0) = d - a;   op.Bp(2, 1) = b - c;
  op.Bp(2, 5) = -d;      op.Bp(2, 6) = c;
  op.Bp(2, 10) = a;      op.Bp(2, 11) = -b;

  op.Bb(0, 3) = b - c;   op.Bb(0, 8) = c;    op.Bb(0, 13) = -b;
  op.Bb(1, 4) = d - a;   op.Bb(1, 9) = -d;   op.Bb(1, 14) = a;
  op.Bb(2, 3) = d - a;   op.Bb(2, 4) = b - c;
  op.Bb(2, 8) = -d;      op.Bb(2, 9) = c;
  op.Bb(2, 13) = a;      op.Bb(2, 14) = -b;

  op.Bs(0, 2) = b - c;   op.Bs(0, 3) = Ae;
  op.Bs(0, 7) = c;       op.Bs(0, 8) = a * c / 2;   op.Bs(0, 9) = b * c / 2;
  op.Bs(0, 12) = -b;     op.Bs(0, 13) = -b * d / 2; op.Bs(0, 14) = -b * c / 2;
  op.Bs(1, 2) = d - a;   op.Bs(1, 4) = Ae;
  op.Bs(1, 7) = -d;      op.Bs(1, 8) = -a * d / 2;  op.Bs(1, 9) = -b * d / 2;
  op.Bs(1, 12) = a;      op.Bs(1, 13) = a * d / 2;  op.Bs(1, 14) = a * c / 2;

  const double scale = 1.0 / (2.0 * Ae);
  op.Bp *= scale;
  op.Bb *= scale;
  op.Bs *= scale;
  return op;
}

namespace {

// Column recombination for subtriangle (O, I, J): one third of the centre
// block goes to every element node, the I and J blocks go to their nodes.
template <int Rows>
void scatter_subtriangle(const Eigen::Matrix<double, Rows, 15>& sub, int I, int J, double weight,
                         Eigen::Matrix<double, Rows, 15>& out) {
  const auto centre = sub.template middleCols<5>(0);
  for (int node = 0; node < 3; ++node) out.middleCols(5 * node, 5) += (weight / 3.0) * centre;
  out.middleCols(5 * I, 5) += weight * sub.template middleCols<5>(5);
  out.middleCols(5 * J, 5) += weight * sub.template middleCols<5>(10);
}

}  // namespace

StrainOperators cs_smooth(const ElementGeometry& geom) {
  StrainOperators smoothed;
  for (int i = 0; i < 3; ++i) {
    const int I = i, J = (i + 1) % 3;
    const StrainOperators sub = dsg3_operators({geom.center, geom.nodes[I], geom.nodes[J]});
    const double weight = geom.sub_areas[i] / geom.area;
    scatter_subtriangle<3>(sub.Bp, I, J, weight, smoothed.Bp);
    scatter_subtriangle<3>(sub.Bb, I, J, weight, smoothed.Bb);
    scatter_subtriangle<2>(sub.Bs, I, J, weight, smoothed.Bs);
  }
  return smoothed;
}

Matrix15 element_stiffness(const StrainOperators& ops, const SectionProperties& sec, double area,
                           double shear_scale) {
  const Matrix15 coupling = ops.Bp.transpose() * sec.B * ops.Bb;
  Matrix15 K = ops.Bp.transpose() * sec.A * ops.Bp + coupling + coupling.transpose() +
               ops.Bb.transpose() * sec.Db * ops.Bb + shear_scale * (ops.Bs.transpose() * sec.E * ops.Bs);
  K *= area;
  return 0.5 * (K + K.transpose());
}

double shear_stabilization_factor(const ElementGeometry& geom, double thickness, double alpha) {
  if (alpha < 0.0 || thickness <= 0.0) throw NumericError("shear stabilization needs alpha >= 0 and thickness > 0");
  double edge = 0.0;
  for (int i = 0; i < 3; ++i) edge = std::max(edge, (geom.nodes[(i + 1) % 3] - geom.nodes[i]).norm());
  const double t2 = thickness * thickness;
  return t2 / (t2 + alpha * edge * edge);
}

Eigen::Matrix<double, 2, 3> shape_gradients(const ElementGeometry& g) {
  const auto& x = g.nodes;
  const double inv = 1.0 / (2.0 * g.area);
  Eigen::Matrix<double, 2, 3> grad;
  grad << x[1].y() - x[2].y(), x[2].y() - x[0].y(), x[0].y() - x[1].y(),
          x[2].x() - x[1].x(), x[0].x() - x[2].x(), x[1].x() - x[0].x();
  return grad * inv;
}

namespace {

// Consistent linear-triangle mass pattern: area/12 * (1 + delta_ij).
Eigen::Matrix3d linear_mass(double area) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Constant(area / 12.0);
  m.diagonal().setConstant(area / 6.0);
  return m;
}

}  // namespace

Matrix15 element_mass(const ElementGeometry& geom, const SectionProperties& sec) {
  const Eigen::Matrix3d base = linear_mass(geom.area);
  Matrix15 M = Matrix15::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int dof = 0; dof < 5; ++dof) {
        const double density = dof <= kW ? sec.p : sec.I;
        M(5 * i + dof, 5 * j + dof) = density * base(i, j);
      }
    }
  }
  return M;
}

Matrix15 element_geometric_stiffness(const ElementGeometry& geom, const Eigen::Vector3d& N,
                                     double h) {
  Eigen::Matrix2d S;
  S << N(0), N(2),
       N(2), N(1);
  const Eigen::Matrix<double, 2, 3> grad = shape_gradients(geom);
  const Eigen::Matrix3d base = grad.transpose() * S * grad * geom.area;
  const double rotary = h * h / 12.0;
  Matrix15 KG = Matrix15::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      KG(5 * i + kW, 5 * j + kW) = base(i, j);
      KG(5 * i + kThetaX, 5 * j + kThetaX) = rotary * base(i, j);
      KG(5 * i + kThetaY, 5 * j + kThetaY) = rotary * base(i, j);
    }
  }
  return KG;
}

Matrix15 element_aero(const ElementGeometry& geom, double flow_angle) {
  const Eigen::Matrix<double, 2, 3> grad = shape_gradients(geom);
  const Eigen::RowVector3d slope = std::cos(flow_angle) * grad.row(0) + std::sin(flow_angle) * grad.row(1);
  // Each linear shape function integrates to area / 3; the slope is constant.
  Matrix15 A = Matrix15::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) A(5 * i + kW, 5 * j + kW) = geom.area / 3.0 * slope(j);
  }
  return A;
}

Matrix15 element_aero_damping(const ElementGeometry& geom) {
  const Eigen::Matrix3d base = linear_mass(geom.area);
  Matrix15 D = Matrix15::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) D(5 * i + kW, 5 * j + kW) = base(i, j);
  }
  return D;
}

ElementMatrices element_matrices(const ElementGeometry& geom, const SectionProperties& sec,
                                 const Eigen::Vector3d& prestress, double flow_angle,
                                 double shear_stabilization) {
  ElementMatrices m;
  m.K = element_stiffness(cs_smooth(geom), sec, geom.area,
                          shear_stabilization_factor(geom, sec.h, shear_stabilization));
  m.M = element_mass(geom, sec);
  m.KG = element_geometric_stiffness(geom, prestress, sec.h);
  m.A = element_aero(geom, flow_angle);
  m.DA = element_aero_damping(geom);
  return m;
}

}  // namespace fgflutter
