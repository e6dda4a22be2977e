#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace fgflutter {

/// Coefficients of the cubic temperature law
///   P(T) = P0 (Pm1/T + 1 + P1 T + P2 T^2 + P3 T^3).
struct TemperatureCoefficients {
  double P0 = 0.0;
  double Pm1 = 0.0;
  double P1 = 0.0;
  double P2 = 0.0;
  double P3 = 0.0;

  /// Temperature-independent property.
  static TemperatureCoefficients constant(double value) { return {value, 0.0, 0.0, 0.0, 0.0}; }
};

/// Evaluates the temperature law at T (kelvin). Throws DomainError for T <= 0.
double property_at_temperature(const TemperatureCoefficients& coeffs, double T);

/// One phase of the graded composite.
struct Constituent {
  std::string name;
  TemperatureCoefficients E;      // Pa
  TemperatureCoefficients alpha;  // 1/K
  double rho = 0.0;               // kg/m^3
  double kappa = 0.0;             // W/(m K)
  double nu = 0.0;

  void validate() const;
};

/// Ceramic (top surface, z = +h/2) and metal (bottom surface, z = -h/2).
struct ConstituentSet {
  Constituent ceramic;
  Constituent metal;
};

enum class PoissonMode { constant, mori_tanaka };

struct FGMSection {
  ConstituentSet constituents;
  double n = 0.0;    // gradient index
  double h = 0.0;    // thickness, m
  double Tc = 300.0; // top (ceramic) surface temperature, K
  double Tm = 300.0; // bottom (metal) surface temperature, K
  double T0 = 300.0; // stress-free reference temperature, K
  int quadrature_points = 20;
  /// Transverse shear coefficients; E_ij carries their product.
  std::array<double, 2> shear_correction{std::sqrt(5.0 / 6.0), std::sqrt(5.0 / 6.0)};
  PoissonMode poisson_mode = PoissonMode::constant;
  /// Poisson's ratio used throughout when poisson_mode == constant.
  double nu = 0.28;

  void validate() const;
};

/// Ceramic volume fraction V_c(z) = ((2z + h) / 2h)^n.
double volume_fraction(double z, double h, double n);
double volume_fraction(double z, const FGMSection& section);

struct EffectiveElastic {
  double E;
  double nu;
};

/// Mori-Tanaka estimate of (E, nu) for ceramic volume fraction Vc.
EffectiveElastic mori_tanaka_effective(double Ec, double Em, double nuc, double num, double Vc);

/// Mori-Tanaka effective bulk modulus; shared by the expansion coefficient law.
double mori_tanaka_bulk(double Ec, double Em, double nuc, double num, double Vc);

/// Rule-of-mixtures density.
double effective_density(double rhoc, double rhom, double Vc);

struct EffectiveThermal {
  double kappa;
  double alpha;
};

/// Effective conductivity and thermal expansion at height z and temperature T.
EffectiveThermal effective_kappa_alpha(const FGMSection& section, double z, double T);

/// Steady one-dimensional conduction through the thickness, solved with the
/// six-term power series in the normalized height (2z + h) / 2h.
class TemperatureProfile {
 public:
  explicit TemperatureProfile(const FGMSection& section);

  double operator()(double z) const;
  /// Series normalizer; the profile is undefined when it vanishes.
  double normalizer() const { return C_; }

 private:
  double eta(double xi) const;

  double h_;
  double n_;
  double Tc_;
  double Tm_;
  double ratio_;  // (kappa_c - kappa_m) / kappa_m
  double C_ = 1.0;
};

TemperatureProfile temperature_profile(const FGMSection& section);

/// Local elastic state at one height through the thickness.
struct PointProperties {
  double z;
  double T;
  double Vc;
  double E;
  double nu;
  double alpha;
  double rho;
};

PointProperties point_properties(const FGMSection& section, const TemperatureProfile& profile, double z);

struct SectionProperties {
  Eigen::Matrix3d A = Eigen::Matrix3d::Zero();   // N/m
  Eigen::Matrix3d B = Eigen::Matrix3d::Zero();   // N
  Eigen::Matrix3d Db = Eigen::Matrix3d::Zero();  // N m
  Eigen::Matrix2d E = Eigen::Matrix2d::Zero();   // N/m, shear
  double p = 0.0;                                // kg/m^2
  double I = 0.0;                                // kg
  Eigen::Vector3d Nth = Eigen::Vector3d::Zero(); // N/m
  Eigen::Vector3d Mth = Eigen::Vector3d::Zero(); // N
  double h = 0.0;
};

/// Through-thickness integrals by Gauss-Legendre quadrature.
SectionProperties section_properties(const FGMSection& section);

struct QuadratureRule {
  std::vector<double> points;   // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int n);

/// Bending stiffness E h^3 / (12 (1 - nu^2)).
double flexural_rigidity(double E, double h, double nu);

}  // namespace fgflutter
