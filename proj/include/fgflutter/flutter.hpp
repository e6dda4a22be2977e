#pragma once

#include "fgflutter/assembly.hpp"
#include "fgflutter/modal_basis.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace fgflutter {

using Complex = std::complex<double>;

/// Dense pencil M q'' + g D q' + (K + lambda A) q = 0; K already includes K_G.
struct Pencil {
  Eigen::MatrixXd K;
  Eigen::MatrixXd A;
  Eigen::MatrixXd M;
  Eigen::MatrixXd D;

  int size() const { return static_cast<int>(K.rows()); }
};

/// Full reduced system as dense matrices. Intended for small meshes.
Pencil dense_pencil(const GlobalSystem& system);

/// Rayleigh-Ritz projection onto the lowest `modes` free-vibration modes of
/// (K + K_G, M).
Pencil modal_pencil(const GlobalSystem& system, int modes);
Pencil project(const GlobalSystem& system, const ModalBasis& basis);

/// Pencil reduced to standard form with the Cholesky factor of M, cached for sweeps.
class FlutterProblem {
 public:
  explicit FlutterProblem(const Pencil& pencil);

  int size() const { return static_cast<int>(K_.rows()); }

  /// Eigenvalues kappa of (K + lambda A) q = kappa M q, ascending real part.
  Eigen::VectorXcd eigenvalues(double lambda) const;
  /// Same, with eigenvectors in the original coordinates (columns).
  void eigen(double lambda, Eigen::VectorXcd& values, Eigen::MatrixXcd& vectors) const;
  /// Roots s of M s^2 + g D s + (K + lambda A) with Im s >= 0, ascending |s|.
  Eigen::VectorXcd damped_roots(double lambda, double g) const;

 private:
  Eigen::MatrixXd K_;
  Eigen::MatrixXd A_;
  Eigen::MatrixXd D_;
  Eigen::MatrixXd L_;  // lower Cholesky factor of M
};

struct EigenSolution {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;
};

/// Solves [(K + lambda A) - kappa M] q = 0. Throws NumericError if M is not
/// positive definite or the QR iteration fails.
EigenSolution solve_eigen(const Pencil& pencil, double lambda);

struct SweepConfig {
  double lambda_start = 0.0;
  double lambda_end = 1.0;
  double lambda_step = 0.005;
  int n_modes_tracked = 10;
  double coalescence_tol = 1e-6;
  double bisection_tol = 1e-4;
  bool damped = false;
  double g_tau = 0.0;
  /// Times the range may be doubled when no instability is found.
  int max_extensions = 0;

  static SweepConfig uniform(double start, double end, int steps);
  void validate() const;
};

struct BranchSample {
  double lambda = 0.0;
  /// Tracked values in branch order. Damped sweeps store -s^2.
  std::vector<Complex> kappa;
};

struct CoalescenceBracket {
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  std::array<Complex, 2> below{};
  std::array<Complex, 2> above{};
  /// Below: two real, distinct values. Above: a conjugate pair (undamped) or
  /// a root with positive growth rate (damped).
  bool verified = false;
};

struct FlutterResult {
  bool found = false;
  double lambda_cr = std::numeric_limits<double>::quiet_NaN();
  double omega_cr_sq = std::numeric_limits<double>::quiet_NaN();
  std::array<int, 2> mode_pair{-1, -1};
  bool damped = false;
  double g_tau = 0.0;
  bool continuity_ok = true;
  CoalescenceBracket bracket;
  std::vector<BranchSample> history;
};

/// Undamped sweep: first lambda where a tracked kappa turns complex, refined by bisection.
FlutterResult sweep_and_detect(const FlutterProblem& problem, const SweepConfig& cfg);
FlutterResult sweep_and_detect(const Pencil& pencil, const SweepConfig& cfg);

/// Damped sweep on the companion form: first lambda where a root's real part turns positive.
FlutterResult damped_flutter(const FlutterProblem& problem, const SweepConfig& cfg);
FlutterResult damped_flutter(const Pencil& pencil, const SweepConfig& cfg);

/// Scale factors from dimensional to reported values.
struct Normalization {
  double lambda_factor = 1.0;    // reported lambda = factor * lambda
  double omega_sq_factor = 1.0;  // reported omega^2 = factor * omega^2
  double damping_factor = 1.0;   // reported g = factor * g_tau
};

/// lambda a^3 / (pi^4 D), omega^2 a^4 rho h / D.
Normalization isotropic_normalization(double a, double h, double E, double nu, double rho);
/// lambda a^3 / D_mo, omega^2 a^4 rho_mo h / D_mo with D_mo = E_m h^3 / (12 (1 - nu^2)).
Normalization reference_normalization(double a, double h, double E_ref, double nu, double rho_ref);

FlutterResult normalize(const FlutterResult& result, const Normalization& norm);

/// Branch history as CSV: lambda,mode_index,re_kappa,im_kappa.
void write_branch_csv(std::ostream& out, const FlutterResult& result);

}  // namespace fgflutter
