#include "fgflutter/error.hpp"
#include "fgflutter/material.hpp"
#include "fgflutter/material_io.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace fgflutter;

namespace {

FGMSection graded_section(double n, double Tc, double Tm) {
  FGMSection s;
  s.constituents = si3n4_sus304();
  s.n = n;
  s.h = 0.05;
  s.Tc = Tc;
  s.Tm = Tm;
  return s;
}

double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

// Hashin-Shtrikman lower bounds; they coincide with the Mori-Tanaka estimate
// for a stiffer inclusion phase.
struct HS {
  double K, G;
};
HS hashin_shtrikman(double Ec, double Em, double nu, double Vc) {
  const double Kc = Ec / (3 * (1 - 2 * nu)), Km = Em / (3 * (1 - 2 * nu));
  const double Gc = Ec / (2 * (1 + nu)), Gm = Em / (2 * (1 + nu));
  const double Vm = 1 - Vc;
  const double K = Km + Vc / (1 / (Kc - Km) + 3 * Vm / (3 * Km + 4 * Gm));
  const double G = Gm + Vc / (1 / (Gc - Gm) + 6 * Vm * (Km + 2 * Gm) / (5 * Gm * (3 * Km + 4 * Gm)));
  return {K, G};
}

// Exact steady conduction with the linear (rule of mixtures) conductivity,
// T = Tm + (Tc - Tm) * int_0^xi dx / k(x) / int_0^1 dx / k(x), by trapezoid.
double conduction_oracle(const FGMSection& s, double z) {
  const double kc = s.constituents.ceramic.kappa, km = s.constituents.metal.kappa;
  const auto inv_k = [&](double xi) { return 1.0 / (km + (kc - km) * std::pow(xi, s.n)); };
  const auto integral = [&](double upper) {
    const int slices = 20000;
    const double d = upper / slices;
    double sum = 0.5 * (inv_k(0.0) + inv_k(upper));
    for (int i = 1; i < slices; ++i) sum += inv_k(i * d);
    return sum * d;
  };
  const double xi = (2 * z + s.h) / (2 * s.h);
  return s.Tm + (s.Tc - s.Tm) * integral(xi) / integral(1.0);
}

}  // namespace

TEST_CASE("temperature law") {
  const Constituent sus = builtin_material("SUS304");
  // E_m(300) = 201.04e9 (1 + 3.079e-4 * 300 - 6.534e-7 * 300^2)
  CHECK(property_at_temperature(sus.E, 300.0) == doctest::Approx(207.788e9).epsilon(1e-5));
  CHECK(property_at_temperature(TemperatureCoefficients::constant(5.0), 812.0) == 5.0);
  CHECK_THROWS_AS(property_at_temperature(sus.E, 0.0), DomainError);
  CHECK_THROWS_AS(property_at_temperature(sus.E, -10.0), DomainError);
}

TEST_CASE("volume fraction") {
  CHECK(volume_fraction(0.5, 1.0, 2.0) == 1.0);
  CHECK(volume_fraction(-0.5, 1.0, 2.0) == 0.0);
  CHECK(volume_fraction(0.0, 1.0, 2.0) == doctest::Approx(0.25));
  CHECK(volume_fraction(0.1, 1.0, 0.0) == 1.0);
  CHECK_THROWS_AS(volume_fraction(0.51, 1.0, 1.0), DomainError);
}

TEST_CASE("Mori-Tanaka against the Hashin-Shtrikman route") {
  const double Ec = 348.43e9, Em = 201.04e9, nu = 0.28;
  for (double Vc : {0.05, 0.3, 0.5, 0.77, 0.99}) {
    const HS hs = hashin_shtrikman(Ec, Em, nu, Vc);
    const EffectiveElastic mt = mori_tanaka_effective(Ec, Em, nu, nu, Vc);
    CHECK(rel(mt.E, 9 * hs.K * hs.G / (3 * hs.K + hs.G)) < 1e-13);
    CHECK(rel(mt.nu, (3 * hs.K - 2 * hs.G) / (2 * (3 * hs.K + hs.G))) < 1e-13);
    CHECK(rel(mori_tanaka_bulk(Ec, Em, nu, nu, Vc), hs.K) < 1e-13);
  }
}

TEST_CASE("Mori-Tanaka phase limits are exact") {
  const double Ec = 348.43e9, Em = 201.04e9;
  CHECK(mori_tanaka_effective(Ec, Em, 0.24, 0.31, 1.0).E == Ec);
  CHECK(mori_tanaka_effective(Ec, Em, 0.24, 0.31, 1.0).nu == 0.24);
  CHECK(mori_tanaka_effective(Ec, Em, 0.24, 0.31, 0.0).E == Em);
  CHECK(mori_tanaka_effective(Ec, Em, 0.24, 0.31, 0.0).nu == 0.31);
  // Identical phases: any fraction returns the phase itself.
  for (double Vc : {0.2, 0.6}) {
    const auto same = mori_tanaka_effective(Em, Em, 0.3, 0.3, Vc);
    CHECK(same.E == doctest::Approx(Em).epsilon(1e-14));
    CHECK(same.nu == doctest::Approx(0.3).epsilon(1e-14));
  }
}

TEST_CASE("Mori-Tanaka estimate is monotone in the ceramic fraction") {
  double previous = 0.0;
  for (int i = 0; i <= 50; ++i) {
    const double E = mori_tanaka_effective(348.43e9, 201.04e9, 0.28, 0.28, i / 50.0).E;
    CHECK(E > previous);
    previous = E;
  }
}

TEST_CASE("effective conductivity and expansion") {
  FGMSection s = graded_section(1.0, 300, 300);
  const auto top = effective_kappa_alpha(s, 0.5 * s.h, 300.0);
  CHECK(top.kappa == 9.19);
  CHECK(top.alpha == property_at_temperature(s.constituents.ceramic.alpha, 300.0));
  const auto bottom = effective_kappa_alpha(s, -0.5 * s.h, 300.0);
  CHECK(bottom.kappa == 12.04);
  CHECK(bottom.alpha == property_at_temperature(s.constituents.metal.alpha, 300.0));

  const auto mid = effective_kappa_alpha(s, 0.0, 300.0);
  CHECK(mid.kappa > 9.19);
  CHECK(mid.kappa < 12.04);
  const double ac = top.alpha, am = bottom.alpha;
  CHECK(mid.alpha > std::min(ac, am));
  CHECK(mid.alpha < std::max(ac, am));
}

TEST_CASE("temperature series against direct conduction quadrature") {
  for (double n : {0.5, 1.0, 2.0, 5.0}) {
    FGMSection s = graded_section(n, 600, 300);
    const TemperatureProfile T(s);
    for (double frac : {-0.4, -0.2, 0.0, 0.2, 0.4}) {
      const double z = frac * s.h;
      const double rise = conduction_oracle(s, z) - s.Tm;
      CHECK(std::abs(T(z) - s.Tm - rise) <= 5e-3 * rise);
    }
    CHECK(T(0.5 * s.h) == 600.0);
    CHECK(T(-0.5 * s.h) == 300.0);
  }
}

TEST_CASE("temperature profile single-phase limits") {
  FGMSection s = graded_section(2.0, 500, 300);
  s.constituents.metal.kappa = s.constituents.ceramic.kappa;
  const TemperatureProfile T(s);
  for (double frac : {-0.5, -0.25, 0.0, 0.3, 0.5}) {
    const double z = frac * s.h;
    CHECK(T(z) == doctest::Approx(300.0 + 200.0 * (frac + 0.5)).epsilon(1e-15));
  }
  FGMSection uniform = graded_section(2.0, 450, 450);
  const TemperatureProfile flat(uniform);
  CHECK(flat(0.01) == 450.0);
  CHECK_THROWS_AS(flat(0.03), DomainError);
}

TEST_CASE("section integrals against 10^4-slice trapezoid") {
  for (double n : {0.0, 0.5, 2.0, 10.0}) {
    FGMSection s = graded_section(n, 600, 300);
    const SectionProperties sec = section_properties(s);
    const TemperatureProfile profile(s);

    const int slices = 10000;
    const double dz = s.h / slices;
    double A = 0, B = 0, D = 0, p = 0, I = 0, N = 0, M = 0;
    for (int i = 0; i <= slices; ++i) {
      const double z = -0.5 * s.h + i * dz;
      const double w = (i == 0 || i == slices) ? 0.5 * dz : dz;
      const double T = profile(z);
      const double Vc = std::pow((2 * z + s.h) / (2 * s.h), n);
      const double Ec = property_at_temperature(s.constituents.ceramic.E, T);
      const double Em = property_at_temperature(s.constituents.metal.E, T);
      const HS hs = Vc == 0.0 ? HS{Em / (3 * (1 - 2 * s.nu)), Em / (2 * (1 + s.nu))}
                  : Vc == 1.0 ? HS{Ec / (3 * (1 - 2 * s.nu)), Ec / (2 * (1 + s.nu))}
                              : hashin_shtrikman(Ec, Em, s.nu, Vc);
      const double E = 9 * hs.K * hs.G / (3 * hs.K + hs.G);
      const double q11 = E / (1 - s.nu * s.nu);
      const double rho = 2370.0 * Vc + 8166.0 * (1 - Vc);
      const double alpha = effective_kappa_alpha(s, z, T).alpha;
      A += w * q11;
      B += w * z * q11;
      D += w * z * z * q11;
      p += w * rho;
      I += w * z * z * rho;
      N += w * q11 * (1 + s.nu) * alpha * (T - 300.0);
      M += w * z * q11 * (1 + s.nu) * alpha * (T - 300.0);
    }
    CAPTURE(n);
    // Power-law kinks at the metal face limit the trapezoid for small n.
    const double tol = n < 1.0 ? 1e-4 : 1e-6;
    CHECK(rel(sec.A(0, 0), A) < tol);
    CHECK(rel(sec.Db(0, 0), D) < tol);
    CHECK(rel(sec.p, p) < tol);
    CHECK(rel(sec.I, I) < tol);
    CHECK(rel(sec.Nth(0), N) < tol);
    CHECK(rel(sec.B(0, 0), B) < tol);
    CHECK(rel(sec.Mth(0), M) < tol);
    CHECK(sec.A(0, 1) == doctest::Approx(s.nu * sec.A(0, 0)));
    CHECK(sec.A(2, 2) == doctest::Approx(0.5 * (1 - s.nu) * sec.A(0, 0)));
  }
}

TEST_CASE("homogeneous section closed forms") {
  FGMSection s = graded_section(0.0, 600, 600);
  const SectionProperties sec = section_properties(s);
  const double E = property_at_temperature(s.constituents.ceramic.E, 600);
  const double alpha = property_at_temperature(s.constituents.ceramic.alpha, 600);
  const double h = s.h, nu = s.nu;
  CHECK(rel(sec.A(0, 0), E * h / (1 - nu * nu)) < 1e-12);
  CHECK(rel(sec.Db(0, 0), flexural_rigidity(E, h, nu)) < 1e-12);
  CHECK(rel(sec.p, 2370.0 * h) < 1e-12);
  CHECK(rel(sec.I, 2370.0 * h * h * h / 12) < 1e-12);
  CHECK(rel(sec.Nth(0), E * alpha * 300.0 * h / (1 - nu)) < 1e-12);
  CHECK(sec.Nth(0) == sec.Nth(1));
  CHECK(sec.Nth(2) == 0.0);
  CHECK(std::abs(sec.Mth(0)) < 1e-12 * sec.Nth(0) * h);
  const double G = E / (2 * (1 + nu));
  CHECK(rel(sec.E(0, 0), 5.0 / 6.0 * G * h) < 1e-12);
  CHECK(rel(sec.E(1, 1), 5.0 / 6.0 * G * h) < 1e-12);
}

TEST_CASE("quadrature doubling is stable") {
  for (double n : {1.0, 2.0, 3.0, 5.0}) {
    FGMSection s = graded_section(n, 600, 300);
    const SectionProperties a = section_properties(s);
    s.quadrature_points = 40;
    const SectionProperties b = section_properties(s);
    CAPTURE(n);
    CHECK(rel(a.A(0, 0), b.A(0, 0)) < 1e-8);
    CHECK(rel(a.B(0, 0), b.B(0, 0)) < 1e-8);
    CHECK(rel(a.Db(0, 0), b.Db(0, 0)) < 1e-8);
    CHECK(rel(a.Nth(0), b.Nth(0)) < 1e-8);
    CHECK(rel(a.Mth(0), b.Mth(0)) < 1e-8);
    CHECK(rel(a.p, b.p) < 1e-8);
  }
}

TEST_CASE("fractional index below one converges algebraically") {
  FGMSection s = graded_section(0.5, 600, 300);
  const double d20 = section_properties(s).Db(0, 0);
  s.quadrature_points = 40;
  const double d40 = section_properties(s).Db(0, 0);
  s.quadrature_points = 80;
  const double d80 = section_properties(s).Db(0, 0);
  CHECK(rel(d20, d80) < 1e-4);
  CHECK(std::abs(d40 - d80) < 0.5 * std::abs(d20 - d80));
}

TEST_CASE("Gauss-Legendre rule") {
  for (int n : {1, 2, 5, 20, 21}) {
    const QuadratureRule r = gauss_legendre(n);
    REQUIRE(r.points.size() == static_cast<std::size_t>(n));
    double w = 0, x2 = 0, x2n1 = 0;
    for (int i = 0; i < n; ++i) {
      w += r.weights[i];
      x2 += r.weights[i] * r.points[i] * r.points[i];
      x2n1 += r.weights[i] * std::pow(r.points[i], 2 * n - 2);
      if (i > 0) CHECK(r.points[i] > r.points[i - 1]);
    }
    CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
    if (n >= 2) CHECK(x2 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(x2n1 == doctest::Approx(2.0 / (2 * n - 1)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(gauss_legendre(0), ConfigurationError);
}

TEST_CASE("section validation") {
  FGMSection s = graded_section(1.0, 300, 300);
  s.quadrature_points = 9;
  CHECK_THROWS_AS(section_properties(s), ConfigurationError);
  s = graded_section(-1.0, 300, 300);
  CHECK_THROWS_AS(section_properties(s), ConfigurationError);
  s = graded_section(1.0, 300, 300);
  s.h = 0.0;
  CHECK_THROWS_AS(section_properties(s), ConfigurationError);
}

TEST_CASE("material files") {
  std::istringstream in(
      "[Zirconia]\n"
      "E = 244.27e9, 0, -1.371e-3, 1.214e-6, -3.681e-10\n"
      "alpha = 12.766e-6, 0, -1.491e-3, 1.006e-5, -6.778e-11\n"
      "rho = 5700\nkappa = 1.7\nnu = 0.3\n"
      "[Steel]\nE = 200e9\nalpha = 12e-6\nrho = 7800\nkappa = 40\nnu = 0.3\n");
  const auto user = load_materials(in);
  REQUIRE(user.size() == 2);
  CHECK(user.at("Zirconia").E.P2 == 1.214e-6);
  CHECK(user.at("Steel").E.P1 == 0.0);
  CHECK(find_material("Steel", user).rho == 7800.0);
  CHECK(find_material("SUS304", user).kappa == 12.04);
  CHECK_THROWS_AS(find_material("Unobtainium", user), ConfigurationError);

  std::istringstream bad("[X]\nE = 1, 2\nalpha = 1\nrho = 1\nkappa = 1\nnu = 0.3\n");
  CHECK_THROWS_AS(load_materials(bad), ConfigurationError);
  std::istringstream missing("[X]\nE = 1\nalpha = 1\nkappa = 1\nnu = 0.3\n");
  CHECK_THROWS_AS(load_materials(missing), ConfigurationError);
}
