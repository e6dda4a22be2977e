#include "fgflutter/material.hpp"

#include "fgflutter/error.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <sstream>

namespace fgflutter {

double property_at_temperature(const TemperatureCoefficients& c, double T) {
  if (!(T > 0.0)) {
    std::ostringstream msg;
    msg << "temperature must be positive (got " << T << " K)";
    throw DomainError(msg.str());
  }
  return c.P0 * (c.Pm1 / T + 1.0 + T * (c.P1 + T * (c.P2 + T * c.P3)));
}

void Constituent::validate() const {
  if (!(rho > 0.0)) throw ConfigurationError("constituent '" + name + "': rho must be positive");
  if (!(kappa > 0.0)) throw ConfigurationError("constituent '" + name + "': kappa must be positive");
  if (!(nu > 0.0 && nu < 0.5)) throw ConfigurationError("constituent '" + name + "': nu must lie in (0, 0.5)");
  if (!(E.P0 > 0.0)) throw ConfigurationError("constituent '" + name + "': E.P0 must be positive");
  if (!(alpha.P0 > 0.0)) throw ConfigurationError("constituent '" + name + "': alpha.P0 must be positive");
}

void FGMSection::validate() const {
  constituents.ceramic.validate();
  constituents.metal.validate();
  if (!(n >= 0.0)) throw ConfigurationError("gradient index must be non-negative");
  if (!(h > 0.0)) throw ConfigurationError("thickness must be positive");
  if (!(Tc > 0.0 && Tm > 0.0 && T0 > 0.0)) throw ConfigurationError("temperatures must be positive");
  if (quadrature_points < 10) {
    throw ConfigurationError("at least 10 through-thickness quadrature points are required");
  }
  if (poisson_mode == PoissonMode::constant && !(nu > 0.0 && nu < 0.5)) {
    throw ConfigurationError("constant Poisson's ratio must lie in (0, 0.5)");
  }
}

double volume_fraction(double z, double h, double n) {
  const double tol = 1e-12 * h;
  if (z < -0.5 * h - tol || z > 0.5 * h + tol) {
    std::ostringstream msg;
    msg << "z = " << z << " lies outside the thickness [" << -0.5 * h << ", " << 0.5 * h << "]";
    throw DomainError(msg.str());
  }
  const double xi = std::clamp((2.0 * z + h) / (2.0 * h), 0.0, 1.0);
  return std::pow(xi, n);
}

double volume_fraction(double z, const FGMSection& section) {
  return volume_fraction(z, section.h, section.n);
}

namespace {

double bulk_modulus(double E, double nu) { return E / (3.0 * (1.0 - 2.0 * nu)); }
double shear_modulus(double E, double nu) { return E / (2.0 * (1.0 + nu)); }

}  // namespace

double mori_tanaka_bulk(double Ec, double Em, double nuc, double num, double Vc) {
  const double Kc = bulk_modulus(Ec, nuc);
  const double Km = bulk_modulus(Em, num);
  if (Vc == 1.0) return Kc;
  if (Vc == 0.0) return Km;
  const double Gm = shear_modulus(Em, num);
  const double Vm = 1.0 - Vc;
  return Km + (Kc - Km) * Vc / (1.0 + Vm * 3.0 * (Kc - Km) / (3.0 * Km + 4.0 * Gm));
}

EffectiveElastic mori_tanaka_effective(double Ec, double Em, double nuc, double num, double Vc) {
  if (Vc == 1.0) return {Ec, nuc};
  if (Vc == 0.0) return {Em, num};
  const double Vm = 1.0 - Vc;
  const double Km = bulk_modulus(Em, num);
  const double Gc = shear_modulus(Ec, nuc);
  const double Gm = shear_modulus(Em, num);
  const double f1 = Gm * (9.0 * Km + 8.0 * Gm) / (6.0 * (Km + 2.0 * Gm));
  const double K = mori_tanaka_bulk(Ec, Em, nuc, num, Vc);
  const double G = Gm + (Gc - Gm) * Vc / (1.0 + Vm * (Gc - Gm) / (Gm + f1));
  return {9.0 * K * G / (3.0 * K + G), (3.0 * K - 2.0 * G) / (2.0 * (3.0 * K + G))};
}

double effective_density(double rhoc, double rhom, double Vc) {
  return rhoc * Vc + rhom * (1.0 - Vc);
}

EffectiveThermal effective_kappa_alpha(const FGMSection& section, double z, double T) {
  const Constituent& c = section.constituents.ceramic;
  const Constituent& m = section.constituents.metal;
  const double Vc = volume_fraction(z, section);
  const double alpha_c = property_at_temperature(c.alpha, T);
  const double alpha_m = property_at_temperature(m.alpha, T);
  if (Vc == 1.0) return {c.kappa, alpha_c};
  if (Vc == 0.0) return {m.kappa, alpha_m};

  const double Vm = 1.0 - Vc;
  const double dk = c.kappa - m.kappa;
  const double kappa = m.kappa + dk * Vc / (1.0 + Vm * dk / (3.0 * m.kappa));

  const double Ec = property_at_temperature(c.E, T);
  const double Em = property_at_temperature(m.E, T);
  const double nuc = section.poisson_mode == PoissonMode::constant ? section.nu : c.nu;
  const double num = section.poisson_mode == PoissonMode::constant ? section.nu : m.nu;
  const double Kc = bulk_modulus(Ec, nuc);
  const double Km = bulk_modulus(Em, num);
  const double K = mori_tanaka_bulk(Ec, Em, nuc, num, Vc);
  const double span = 1.0 / Kc - 1.0 / Km;
  double alpha;
  if (std::abs(span) <= 1e-14 * std::abs(1.0 / Km)) {
    // Equal bulk moduli leave the interpolation weight undefined.
    alpha = alpha_m + (alpha_c - alpha_m) * Vc;
  } else {
    alpha = alpha_m + (alpha_c - alpha_m) * (1.0 / K - 1.0 / Km) / span;
  }
  return {kappa, alpha};
}

TemperatureProfile::TemperatureProfile(const FGMSection& section)
    : h_(section.h),
      n_(section.n),
      Tc_(section.Tc),
      Tm_(section.Tm),
      ratio_((section.constituents.ceramic.kappa - section.constituents.metal.kappa) /
             section.constituents.metal.kappa) {
  if (!(section.constituents.ceramic.kappa > 0.0 && section.constituents.metal.kappa > 0.0)) {
    throw DomainError("thermal conductivities must be positive");
  }
  double C = 0.0;
  double term = 1.0;
  for (int k = 0; k <= 5; ++k) {
    C += term / (k * n_ + 1.0);
    term *= -ratio_;
  }
  if (C == 0.0 || !std::isfinite(C)) {
    throw NumericError("temperature series normalizer vanished; check conductivities");
  }
  C_ = C;
}

double TemperatureProfile::eta(double xi) const {
  double sum = 0.0;
  double term = 1.0;
  for (int k = 0; k <= 5; ++k) {
    sum += term * std::pow(xi, k * n_ + 1.0) / (k * n_ + 1.0);
    term *= -ratio_;
  }
  return sum / C_;
}

double TemperatureProfile::operator()(double z) const {
  const double tol = 1e-12 * h_;
  if (z < -0.5 * h_ - tol || z > 0.5 * h_ + tol) {
    throw DomainError("temperature requested outside the thickness");
  }
  if (Tc_ == Tm_) return Tc_;
  if (z >= 0.5 * h_) return Tc_;
  if (z <= -0.5 * h_) return Tm_;
  const double xi = (2.0 * z + h_) / (2.0 * h_);
  return Tm_ + (Tc_ - Tm_) * eta(xi);
}

TemperatureProfile temperature_profile(const FGMSection& section) {
  return TemperatureProfile(section);
}

PointProperties point_properties(const FGMSection& section, const TemperatureProfile& profile,
                                 double z) {
  const Constituent& c = section.constituents.ceramic;
  const Constituent& m = section.constituents.metal;
  PointProperties pt{};
  pt.z = z;
  pt.T = profile(z);
  pt.Vc = volume_fraction(z, section);
  const double Ec = property_at_temperature(c.E, pt.T);
  const double Em = property_at_temperature(m.E, pt.T);
  if (section.poisson_mode == PoissonMode::constant) {
    pt.E = mori_tanaka_effective(Ec, Em, section.nu, section.nu, pt.Vc).E;
    pt.nu = section.nu;
  } else {
    const EffectiveElastic eff = mori_tanaka_effective(Ec, Em, c.nu, m.nu, pt.Vc);
    pt.E = eff.E;
    pt.nu = eff.nu;
  }
  pt.alpha = effective_kappa_alpha(section, z, pt.T).alpha;
  pt.rho = effective_density(c.rho, m.rho, pt.Vc);
  return pt;
}

SectionProperties section_properties(const FGMSection& section) {
  section.validate();
  const TemperatureProfile profile(section);
  const QuadratureRule rule = gauss_legendre(section.quadrature_points);
  const double half = 0.5 * section.h;

  SectionProperties out;
  out.h = section.h;
  double shear = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const double z = half * rule.points[q];
    const double w = half * rule.weights[q];
    const PointProperties pt = point_properties(section, profile, z);

    const double q11 = pt.E / (1.0 - pt.nu * pt.nu);
    const double q12 = pt.nu * q11;
    const double q66 = pt.E / (2.0 * (1.0 + pt.nu));
    Eigen::Matrix3d Q;
    Q << q11, q12, 0.0,
         q12, q11, 0.0,
         0.0, 0.0, q66;

    out.A += w * Q;
    out.B += (w * z) * Q;
    out.Db += (w * z * z) * Q;
    shear += w * q66;
    out.p += w * pt.rho;
    out.I += w * z * z * pt.rho;

    const double thermal = (q11 + q12) * pt.alpha * (pt.T - section.T0);
    out.Nth(0) += w * thermal;
    out.Nth(1) += w * thermal;
    out.Mth(0) += w * z * thermal;
    out.Mth(1) += w * z * thermal;
  }
  // Rows follow the shear strain order (xz, yz); pair entries are (v4 = yz, v5 = xz).
  const double v4 = section.shear_correction[0];
  const double v5 = section.shear_correction[1];
  out.E << v5 * v5 * shear, 0.0,
           0.0, v4 * v4 * shear;
  return out;
}

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw ConfigurationError("quadrature order must be positive");
  QuadratureRule rule;
  rule.points.reserve(n);
  rule.weights.reserve(n);
  // Boost returns the non-negative roots in ascending order.
  const std::vector<double> roots = boost::math::legendre_p_zeros<double>(n);
  auto weight = [n](double x) {
    const double dp = boost::math::legendre_p_prime<double>(n, x);
    return 2.0 / ((1.0 - x * x) * dp * dp);
  };
  for (auto it = roots.rbegin(); it != roots.rend(); ++it) {
    if (*it == 0.0) continue;
    rule.points.push_back(-*it);
    rule.weights.push_back(weight(*it));
  }
  for (double x : roots) {
    rule.points.push_back(x);
    rule.weights.push_back(weight(x));
  }
  return rule;
}

double flexural_rigidity(double E, double h, double nu) {
  return E * h * h * h / (12.0 * (1.0 - nu * nu));
}

}  // namespace fgflutter
