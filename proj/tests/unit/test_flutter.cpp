#include "fgflutter/error.hpp"
#include "fgflutter/flutter.hpp"
#include "fgflutter/pipeline.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace fgflutter;

namespace {

// K = diag(c - d, c + d), A = a [[0, 1], [-1, 0]], M = D = I.
// kappa = c +- sqrt(d^2 - a^2 lambda^2), coalescing at lambda = d / a.
Pencil two_mode(double c, double d, double a) {
  Pencil p;
  p.K = Eigen::Vector2d(c - d, c + d).asDiagonal();
  p.A.resize(2, 2);
  p.A << 0.0, a, -a, 0.0;
  p.M = Eigen::Matrix2d::Identity();
  p.D = Eigen::Matrix2d::Identity();
  return p;
}

// Diagonal split d - e lambda with weak coupling a: complex only while
// |d - e lambda| < a lambda, i.e. for lambda in [d / (e + a), d / (e - a)].
Pencil bubble(double c, double d, double e, double a) {
  Pencil p = two_mode(c, 0.0, a);
  p.K = Eigen::Vector2d(c - d, c + d).asDiagonal();
  p.A(0, 0) = e;
  p.A(1, 1) = -e;
  return p;
}

SweepConfig sweep(double end, int steps) {
  SweepConfig cfg = SweepConfig::uniform(0.0, end, steps);
  cfg.n_modes_tracked = 2;
  cfg.bisection_tol = 1e-8;
  return cfg;
}

RunConfig small_plate() {
  RunConfig c;
  c.gradient_index = {1.0};
  c.thickness_ratio = {20.0};
  c.nx = c.ny = 8;
  return c;
}

}  // namespace

TEST_CASE("two-mode pencil against the closed form") {
  const double c = 10.0, d = 2.0, a = 4.0;
  const FlutterProblem problem(two_mode(c, d, a));
  for (double lambda : {0.0, 0.2, 0.45, 0.6, 1.0}) {
    const Complex root = std::sqrt(Complex(d * d - a * a * lambda * lambda));
    const Eigen::VectorXcd k = problem.eigenvalues(lambda);
    CAPTURE(lambda);
    Complex lo = c - root, hi = c + root;
    if (lo.imag() > hi.imag()) std::swap(lo, hi);
    const Complex first = k(0).imag() <= k(1).imag() ? k(0) : k(1);
    const Complex second = k(0).imag() <= k(1).imag() ? k(1) : k(0);
    CHECK(std::abs(first - lo) < 1e-12 * c);
    CHECK(std::abs(second - hi) < 1e-12 * c);
  }

  const FlutterResult r = sweep_and_detect(problem, sweep(1.0, 40));
  REQUIRE(r.found);
  CHECK(r.lambda_cr == doctest::Approx(d / a).epsilon(1e-7));
  CHECK(r.omega_cr_sq == doctest::Approx(c).epsilon(1e-6));
  CHECK(r.bracket.verified);
  CHECK(r.bracket.lambda_lo < r.lambda_cr);
  CHECK(r.mode_pair[0] != r.mode_pair[1]);
}

TEST_CASE("general mass matrix against the generalized eigensolver") {
  Pencil p;
  p.K.resize(3, 3);
  p.K << 4, -1, 0, -1, 5, -2, 0, -2, 7;
  p.A.resize(3, 3);
  p.A << 0, 1, 0.5, -1, 0, 1, -0.5, -1, 0;
  p.M.resize(3, 3);
  p.M << 2, 0.3, 0, 0.3, 1.5, 0.2, 0, 0.2, 1;
  p.D = p.M;
  const FlutterProblem problem(p);
  for (double lambda : {0.0, 0.7, 2.5}) {
    Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges(p.K + lambda * p.A, p.M);
    Eigen::VectorXcd want = ges.eigenvalues();
    Eigen::VectorXcd got = problem.eigenvalues(lambda);
    for (int i = 0; i < 3; ++i) {
      double best = 1e300;
      for (int j = 0; j < 3; ++j) best = std::min(best, std::abs(got(i) - want(j)));
      CHECK(best < 1e-11 * want.cwiseAbs().maxCoeff());
    }
    Eigen::VectorXcd values;
    Eigen::MatrixXcd vectors;
    problem.eigen(lambda, values, vectors);
    for (int i = 0; i < 3; ++i) {
      const Eigen::VectorXcd residual =
          (p.K + lambda * p.A).cast<Complex>() * vectors.col(i) - values(i) * (p.M.cast<Complex>() * vectors.col(i));
      CHECK(residual.norm() < 1e-11 * vectors.col(i).norm() * values.cwiseAbs().maxCoeff());
    }
  }
  Pencil bad = p;
  bad.M(2, 2) = -1.0;
  CHECK_THROWS_AS(FlutterProblem{bad}, NumericError);
  CHECK_THROWS_AS(solve_eigen(bad, 0.0), NumericError);
}

TEST_CASE("damped onset with proportional damping") {
  // With D = M each kappa gives s^2 + g s + kappa = 0, unstable once
  // (Im kappa)^2 > g^2 Re kappa: lambda = sqrt(d^2 + g^2 c) / a.
  const double c = 10.0, d = 2.0, a = 4.0;
  const FlutterProblem problem(two_mode(c, d, a));
  for (double g : {0.5, 1.0, 2.0}) {
    SweepConfig cfg = sweep(2.0, 40);
    cfg.damped = true;
    cfg.g_tau = g;
    cfg.coalescence_tol = 1e-12;
    const FlutterResult r = damped_flutter(problem, cfg);
    REQUIRE(r.found);
    CAPTURE(g);
    CHECK(r.lambda_cr == doctest::Approx(std::sqrt(d * d + g * g * c) / a).epsilon(1e-6));
    CHECK(r.lambda_cr > d / a);
    CHECK(r.bracket.verified);
  }
}

TEST_CASE("zero damping recovers the undamped boundary") {
  const FlutterProblem problem(two_mode(10.0, 2.0, 4.0));
  SweepConfig cfg = sweep(1.0, 40);
  const FlutterResult undamped = sweep_and_detect(problem, cfg);
  cfg.damped = true;
  const FlutterResult damped = damped_flutter(problem, cfg);
  REQUIRE(undamped.found);
  REQUIRE(damped.found);
  CHECK(std::abs(damped.lambda_cr - undamped.lambda_cr) <= 2e-6 * undamped.lambda_cr);
}

TEST_CASE("restricted sweep below the boundary finds nothing") {
  const FlutterProblem problem(two_mode(10.0, 2.0, 4.0));
  const FlutterResult r = sweep_and_detect(problem, sweep(0.45, 30));
  CHECK_FALSE(r.found);
  CHECK(std::isnan(r.lambda_cr));
  CHECK(r.continuity_ok);
  REQUIRE(r.history.size() >= 31u);
  for (std::size_t i = 1; i < r.history.size(); ++i) {
    CHECK(r.history[i].lambda > r.history[i - 1].lambda);
    for (const Complex k : r.history[i].kappa) CHECK(k.imag() == 0.0);
  }
}

TEST_CASE("range extension doubles the sweep") {
  const FlutterProblem problem(two_mode(10.0, 2.0, 4.0));
  SweepConfig cfg = sweep(0.2, 10);
  CHECK_FALSE(sweep_and_detect(problem, cfg).found);
  cfg.max_extensions = 2;  // 0.2 -> 0.4 -> 0.8
  const FlutterResult r = sweep_and_detect(problem, cfg);
  REQUIRE(r.found);
  CHECK(r.lambda_cr == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("crossing real branches keep their identity") {
  // kappa = 1 + lambda and 2 - lambda cross at 0.5 without coupling.
  Pencil p = two_mode(1.5, 0.5, 0.0);
  p.A = Eigen::Vector2d(1.0, -1.0).asDiagonal();
  const FlutterResult r = sweep_and_detect(FlutterProblem(p), sweep(1.0, 20));
  CHECK_FALSE(r.found);
  const auto& last = r.history.back();
  CHECK(last.lambda == doctest::Approx(1.0));
  CHECK(last.kappa[0].real() == doctest::Approx(2.0));
  CHECK(last.kappa[1].real() == doctest::Approx(1.0));
}

TEST_CASE("a narrow coalescence between grid samples is found") {
  // Complex for lambda in [1/1.01, 1/0.99]; the 0.3 grid steps over it.
  const double c = 10.0, d = 1.0, e = 1.0, a = 0.01;
  const FlutterProblem problem(bubble(c, d, e, a));
  const double onset = d / (e + a);
  CHECK(problem.eigenvalues(0.9).imag().cwiseAbs().maxCoeff() == 0.0);
  CHECK(problem.eigenvalues(1.2).imag().cwiseAbs().maxCoeff() == 0.0);
  CHECK(problem.eigenvalues(1.0).imag().cwiseAbs().maxCoeff() > 0.0);

  const FlutterResult r = sweep_and_detect(problem, sweep(3.0, 10));
  REQUIRE(r.found);
  CHECK(r.lambda_cr == doctest::Approx(onset).epsilon(1e-7));
  CHECK(r.bracket.verified);
  for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i].lambda > r.history[i - 1].lambda);
}

TEST_CASE("normalization factors") {
  const double a = 0.3, h = 0.01, E = 70e9, nu = 0.3, rho = 2700.0;
  const double D = E * h * h * h / (12.0 * (1.0 - nu * nu));
  const Normalization iso = isotropic_normalization(a, h, E, nu, rho);
  CHECK(iso.lambda_factor == doctest::Approx(a * a * a / (std::pow(std::numbers::pi, 4) * D)));
  CHECK(iso.omega_sq_factor == doctest::Approx(std::pow(a, 4) * rho * h / D));
  const Normalization ref = reference_normalization(a, h, E, nu, rho);
  CHECK(ref.lambda_factor == doctest::Approx(iso.lambda_factor * std::pow(std::numbers::pi, 4)));

  const FlutterResult raw = sweep_and_detect(FlutterProblem(two_mode(10.0, 2.0, 4.0)), sweep(1.0, 20));
  Normalization n;
  n.lambda_factor = 2.0;
  n.omega_sq_factor = 3.0;
  const FlutterResult scaled = normalize(raw, n);
  CHECK(scaled.lambda_cr == 2.0 * raw.lambda_cr);
  CHECK(scaled.omega_cr_sq == 3.0 * raw.omega_cr_sq);
  CHECK(scaled.history.back().kappa[0] == 3.0 * raw.history.back().kappa[0]);

  std::ostringstream csv;
  write_branch_csv(csv, raw);
  CHECK(csv.str().rfind("lambda,mode_index,re_kappa,im_kappa\n", 0) == 0);
}

TEST_CASE("plate spectrum at zero flow is real") {
  const RunConfig config = small_plate();
  const PlateModel model = build_model(config, resolve_constituents(config), expand_cases(config).front());
  const FlutterProblem problem(dense_pencil(model.system));
  const Eigen::VectorXcd k = problem.eigenvalues(0.0);
  const double scale = k.cwiseAbs().maxCoeff();
  for (int i = 0; i < k.size(); ++i) {
    CHECK(std::abs(k(i).imag()) < 1e-9 * scale);
    CHECK(k(i).real() > 0.0);
  }
}

TEST_CASE("modal and dense routes agree on a plate") {
  const RunConfig config = small_plate();
  const PlateModel model = build_model(config, resolve_constituents(config), expand_cases(config).front());
  const double to_dimensional = 1.0 / model.normalization.lambda_factor;
  SweepConfig cfg = SweepConfig::uniform(0.0, 2000.0 * to_dimensional, 200);
  cfg.bisection_tol = 1e-6;

  const FlutterResult dense = sweep_and_detect(dense_pencil(model.system), cfg);
  const FlutterResult modal = sweep_and_detect(modal_pencil(model.system, 40), cfg);
  REQUIRE(dense.found);
  REQUIRE(modal.found);
  CHECK(dense.bracket.verified);
  CHECK(modal.bracket.verified);
  CHECK(modal.lambda_cr == doctest::Approx(dense.lambda_cr).epsilon(5e-3));
  CHECK(modal.omega_cr_sq == doctest::Approx(dense.omega_cr_sq).epsilon(5e-3));
  CHECK(dense.mode_pair == std::array<int, 2>{0, 1});

  // Rayleigh-Ritz bounds each frequency from above.
  const Eigen::VectorXcd full = FlutterProblem(dense_pencil(model.system)).eigenvalues(0.0);
  const Eigen::VectorXcd reduced = FlutterProblem(modal_pencil(model.system, 40)).eigenvalues(0.0);
  for (int i = 0; i < 10; ++i) CHECK(reduced(i).real() >= full(i).real() * (1.0 - 1e-9));
}

TEST_CASE("damped plate boundary lies above the undamped one") {
  const RunConfig config = small_plate();
  const PlateModel model = build_model(config, resolve_constituents(config), expand_cases(config).front());
  const Pencil pencil = modal_pencil(model.system, 40);
  SweepConfig cfg = SweepConfig::uniform(0.0, 2000.0 / model.normalization.lambda_factor, 200);
  const FlutterResult undamped = sweep_and_detect(pencil, cfg);
  cfg.damped = true;
  cfg.g_tau = 2.0 / model.normalization.damping_factor;
  const FlutterResult damped = damped_flutter(pencil, cfg);
  REQUIRE(undamped.found);
  REQUIRE(damped.found);
  CHECK(damped.bracket.verified);
  CHECK(damped.lambda_cr > undamped.lambda_cr);
}

TEST_CASE("sweep configuration validation") {
  const FlutterProblem problem(two_mode(10.0, 2.0, 4.0));
  SweepConfig cfg = sweep(1.0, 10);
  cfg.n_modes_tracked = 1;
  CHECK_THROWS_AS(sweep_and_detect(problem, cfg), ConfigurationError);
  cfg = sweep(1.0, 10);
  cfg.lambda_end = 0.0;
  CHECK_THROWS_AS(sweep_and_detect(problem, cfg), ConfigurationError);
  cfg = sweep(1.0, 10);
  cfg.damped = true;
  cfg.g_tau = -1.0;
  CHECK_THROWS_AS(damped_flutter(problem, cfg), ConfigurationError);
  cfg = sweep(1.0, 10);
  cfg.lambda_start = 0.6;
  cfg.lambda_end = 1.0;
  CHECK_THROWS_AS(sweep_and_detect(problem, cfg), NumericError);
}
