#include "fgflutter/flutter.hpp"

#include "fgflutter/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

namespace fgflutter {

Pencil dense_pencil(const GlobalSystem& system) {
  Pencil p;
  p.K = Eigen::MatrixXd(system.K + system.KG);
  p.A = Eigen::MatrixXd(system.A);
  p.M = Eigen::MatrixXd(system.M);
  p.D = Eigen::MatrixXd(system.DA);
  return p;
}

Pencil project(const GlobalSystem& system, const ModalBasis& basis) {
  const Eigen::MatrixXd& V = basis.vectors;
  const SparseMatrix stiffness = system.K + system.KG;
  Pencil p;
  p.K = V.transpose() * (stiffness * V);
  p.A = V.transpose() * (system.A * V);
  p.M = V.transpose() * (system.M * V);
  p.D = V.transpose() * (system.DA * V);
  p.K = 0.5 * (p.K + p.K.transpose()).eval();
  p.M = 0.5 * (p.M + p.M.transpose()).eval();
  p.D = 0.5 * (p.D + p.D.transpose()).eval();
  return p;
}

Pencil modal_pencil(const GlobalSystem& system, int modes) {
  ModalBasisOptions options;
  options.modes = modes;
  return project(system, lowest_modes(system.K + system.KG, system.M, options));
}

namespace {

Eigen::MatrixXd congruence_inverse(const Eigen::MatrixXd& L, const Eigen::MatrixXd& X) {
  const auto tri = L.triangularView<Eigen::Lower>();
  const Eigen::MatrixXd Y = tri.solve(X);
  return tri.solve(Y.transpose()).transpose();
}

void sort_by_real(Eigen::VectorXcd& values, Eigen::MatrixXcd* vectors) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    if (values(i).real() != values(j).real()) return values(i).real() < values(j).real();
    return values(i).imag() < values(j).imag();
  });
  Eigen::VectorXcd sorted(values.size());
  Eigen::MatrixXcd sorted_vectors;
  if (vectors) sorted_vectors.resize(vectors->rows(), vectors->cols());
  for (int k = 0; k < values.size(); ++k) {
    sorted(k) = values(order[k]);
    if (vectors) sorted_vectors.col(k) = vectors->col(order[k]);
  }
  values = sorted;
  if (vectors) *vectors = sorted_vectors;
}

}  // namespace

FlutterProblem::FlutterProblem(const Pencil& pencil) {
  const int n = pencil.size();
  if (pencil.M.rows() != n || pencil.A.rows() != n || pencil.D.rows() != n) {
    throw std::invalid_argument("FlutterProblem: pencil matrices differ in size");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(pencil.M);
  if (llt.info() != Eigen::Success) throw NumericError("mass matrix is not positive definite");
  L_ = llt.matrixL();
  K_ = congruence_inverse(L_, pencil.K);
  K_ = 0.5 * (K_ + K_.transpose()).eval();
  A_ = congruence_inverse(L_, pencil.A);
  D_ = congruence_inverse(L_, pencil.D);
}

Eigen::VectorXcd FlutterProblem::eigenvalues(double lambda) const {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(K_ + lambda * A_, false);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "Hessenberg QR did not converge at lambda = " << lambda << " (order " << size() << ")";
    throw NumericError(msg.str());
  }
  Eigen::VectorXcd values = solver.eigenvalues();
  sort_by_real(values, nullptr);
  return values;
}

void FlutterProblem::eigen(double lambda, Eigen::VectorXcd& values, Eigen::MatrixXcd& vectors) const {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(K_ + lambda * A_, true);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "Hessenberg QR did not converge at lambda = " << lambda << " (order " << size() << ")";
    throw NumericError(msg.str());
  }
  values = solver.eigenvalues();
  const Eigen::MatrixXcd y = solver.eigenvectors();
  vectors = L_.cast<Complex>().transpose().triangularView<Eigen::Upper>().solve(y);
  sort_by_real(values, &vectors);
}

Eigen::VectorXcd FlutterProblem::damped_roots(double lambda, double g) const {
  const int n = size();
  const Eigen::MatrixXd H = K_ + lambda * A_;
  // Solve for sigma = s / w0 so both companion blocks are of order one.
  const double w0 = std::sqrt(std::max(H.cwiseAbs().rowwise().sum().maxCoeff(), 1e-300));
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  C.topRightCorner(n, n).setIdentity();
  C.bottomLeftCorner(n, n) = -H / (w0 * w0);
  C.bottomRightCorner(n, n) = -(g / w0) * D_;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(C, false);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "companion eigensolve did not converge at lambda = " << lambda;
    throw NumericError(msg.str());
  }
  const Eigen::VectorXcd all = solver.eigenvalues() * w0;
  std::vector<Complex> upper;
  for (int k = 0; k < all.size(); ++k) {
    if (all(k).imag() >= 0.0) upper.push_back(all(k));
  }
  std::stable_sort(upper.begin(), upper.end(), [](Complex x, Complex y) { return std::abs(x) < std::abs(y); });
  return Eigen::Map<Eigen::VectorXcd>(upper.data(), static_cast<Eigen::Index>(upper.size()));
}

EigenSolution solve_eigen(const Pencil& pencil, double lambda) {
  EigenSolution out;
  FlutterProblem(pencil).eigen(lambda, out.values, out.vectors);
  return out;
}

SweepConfig SweepConfig::uniform(double start, double end, int steps) {
  SweepConfig cfg;
  cfg.lambda_start = start;
  cfg.lambda_end = end;
  cfg.lambda_step = (end - start) / std::max(1, steps);
  return cfg;
}

void SweepConfig::validate() const {
  if (!(lambda_step > 0.0)) throw ConfigurationError("lambda_step must be positive");
  if (!(lambda_end > lambda_start)) throw ConfigurationError("lambda_end must exceed lambda_start");
  if (lambda_start < 0.0) throw ConfigurationError("lambda_start must be non-negative");
  if (n_modes_tracked < 2) throw ConfigurationError("at least two modes must be tracked");
  if (!(coalescence_tol > 0.0 && coalescence_tol < 1.0)) throw ConfigurationError("coalescence_tol must lie in (0, 1)");
  if (!(bisection_tol > 0.0 && bisection_tol < 1.0)) throw ConfigurationError("bisection_tol must lie in (0, 1)");
  if (damped && g_tau < 0.0) throw ConfigurationError("damping parameter must be non-negative");
  if (max_extensions < 0) throw ConfigurationError("max_extensions must be non-negative");
}

namespace {

// Greedy minimal-distance pairing of `next` onto the slots of `target`, the
// expected position of each slot of the previous sample. Slots without a
// partner are dropped; unmatched new values are appended.
std::vector<Complex> match_branches(const std::vector<Complex>& target, const std::vector<Complex>& next) {
  struct Candidate {
    double distance;
    std::size_t from;
    std::size_t to;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(target.size() * next.size());
  for (std::size_t i = 0; i < target.size(); ++i) {
    for (std::size_t j = 0; j < next.size(); ++j) {
      candidates.push_back({std::abs(target[i] - next[j]), i, j});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& x, const Candidate& y) { return x.distance < y.distance; });
  std::vector<Complex> out(target.size());
  std::vector<bool> used_from(target.size(), false), used_to(next.size(), false);
  const std::size_t n = std::min(target.size(), next.size());
  std::size_t assigned = 0;
  for (const auto& c : candidates) {
    if (assigned == n) break;
    if (used_from[c.from] || used_to[c.to]) continue;
    out[c.from] = next[c.to];
    used_from[c.from] = used_to[c.to] = true;
    ++assigned;
  }
  std::vector<Complex> kept;
  kept.reserve(next.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (used_from[i]) kept.push_back(out[i]);
  }
  for (std::size_t j = 0; j < next.size(); ++j) {
    if (!used_to[j]) kept.push_back(next[j]);
  }
  return kept;
}

// One sweep mode: what is sampled at each lambda and when the system is unstable.
// Samples hold the whole spectrum; the first `tracked` slots are the tracked branches.
struct SweepModel {
  int tracked = 0;
  double tol = 0.0;

  SweepModel(int t, double tl) : tracked(t), tol(tl) {}
  virtual ~SweepModel() = default;
  virtual std::vector<Complex> sample(double lambda) const = 0;
  virtual bool unstable_value(Complex value) const = 0;
  /// Value recorded in the branch history.
  virtual Complex to_kappa(Complex value) const { return value; }
  /// Relative gaps between neighbouring tracked branches; empty when the
  /// model has no coalescence to look for between samples.
  virtual std::vector<double> gaps(const std::vector<Complex>&) const { return {}; }

  std::size_t count(const std::vector<Complex>& values) const {
    return std::min<std::size_t>(static_cast<std::size_t>(tracked), values.size());
  }
  virtual bool unstable(const std::vector<Complex>& values) const {
    for (std::size_t i = 0; i < count(values); ++i) {
      if (unstable_value(values[i])) return true;
    }
    return false;
  }
  std::vector<Complex> kappa(const std::vector<Complex>& values) const {
    std::vector<Complex> out(count(values));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = to_kappa(values[i]);
    return out;
  }
};

struct UndampedModel final : SweepModel {
  const FlutterProblem& problem;

  UndampedModel(const FlutterProblem& p, int t, double tl) : SweepModel(t, tl), problem(p) {}

  std::vector<Complex> sample(double lambda) const override {
    const Eigen::VectorXcd v = problem.eigenvalues(lambda);
    return {v.data(), v.data() + v.size()};
  }
  bool unstable_value(Complex k) const override { return std::abs(k.imag()) > tol * std::abs(k); }
  /// Slot holding the value closest to the conjugate of slot i.
  static std::size_t partner(const std::vector<Complex>& values, std::size_t i) {
    std::size_t best = i == 0 ? 1 : 0;
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (j != i && std::abs(values[j] - std::conj(values[i])) < std::abs(values[best] - std::conj(values[i]))) {
        best = j;
      }
    }
    return best;
  }
  /// A coalescence counts only when both merging branches are tracked.
  bool coalesced(const std::vector<Complex>& values, std::size_t i) const {
    return i < count(values) && unstable_value(values[i]) && partner(values, i) < count(values);
  }
  bool unstable(const std::vector<Complex>& values) const override {
    for (std::size_t i = 0; i < count(values); ++i) {
      if (coalesced(values, i)) return true;
    }
    return false;
  }
  std::vector<double> gaps(const std::vector<Complex>& values) const override {
    std::vector<double> re(count(values));
    for (std::size_t i = 0; i < re.size(); ++i) re[i] = values[i].real();
    std::sort(re.begin(), re.end());
    std::vector<double> out;
    for (std::size_t i = 1; i < re.size(); ++i) {
      out.push_back((re[i] - re[i - 1]) / std::max({std::abs(re[i]), std::abs(re[i - 1]), 1e-300}));
    }
    return out;
  }
};

// Tracks the roots s; the history stores -s^2 so s = i omega maps to omega^2.
struct DampedModel final : SweepModel {
  const FlutterProblem& problem;
  double g;

  DampedModel(const FlutterProblem& p, int t, double tl, double gt) : SweepModel(t, tl), problem(p), g(gt) {}

  std::vector<Complex> sample(double lambda) const override {
    const Eigen::VectorXcd s = problem.damped_roots(lambda, g);
    return {s.data(), s.data() + s.size()};
  }
  bool unstable_value(Complex s) const override { return s.real() > tol * std::abs(s); }
  Complex to_kappa(Complex s) const override { return -s * s; }
  // Tracked branches, plus any non-oscillatory root: a root that turns real
  // and positive (divergence) need not stay in a tracked slot.
  bool watched(const std::vector<Complex>& values, std::size_t i) const {
    return i < count(values) || std::abs(values[i].imag()) <= values[i].real();
  }
  bool unstable(const std::vector<Complex>& values) const override {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (watched(values, i) && unstable_value(values[i])) return true;
    }
    return false;
  }
};

struct Sample {
  double lambda = 0.0;
  std::vector<Complex> values;  // whole spectrum in branch order
};

// Each tracked branch must land within ten secant steps of its linear
// prediction from the two preceding samples.
bool continuous(const SweepModel& model, const Sample& a, const Sample& b, const Sample& c) {
  const std::vector<Complex> ka = model.kappa(a.values), kb = model.kappa(b.values), kc = model.kappa(c.values);
  double scale = 0.0;
  for (const auto& k : kc) scale = std::max(scale, std::abs(k));
  const double ratio = (c.lambda - b.lambda) / (b.lambda - a.lambda);
  for (std::size_t i = 0; i < std::min({ka.size(), kb.size(), kc.size()}); ++i) {
    const Complex predicted = kb[i] + ratio * (kb[i] - ka[i]);
    if (std::abs(kc[i] - predicted) > 10.0 * ratio * std::abs(kb[i] - ka[i]) + 1e-4 * scale) return false;
  }
  return true;
}

// Linear prediction of every slot of `b` at `lambda` from the secant a -> b.
std::vector<Complex> extrapolate(const Sample& a, const Sample& b, double lambda) {
  const double ratio = (lambda - b.lambda) / (b.lambda - a.lambda);
  std::vector<Complex> out = b.values;
  for (std::size_t i = 0; i < std::min(a.values.size(), out.size()); ++i) out[i] += ratio * (b.values[i] - a.values[i]);
  return out;
}

// Samples (from, to] in `parts` equal steps, stopping at the first unstable one.
struct Walk {
  std::vector<Sample> samples;
  bool continuous = true;
  bool unstable = false;
};

Walk walk(const SweepModel& model, const std::vector<Sample>& tail, double to, int parts) {
  Walk out;
  const Sample& last = tail.back();
  const double step = (to - last.lambda) / parts;
  for (int j = 1; j <= parts; ++j) {
    const double lambda = j == parts ? to : last.lambda + j * step;
    const Sample& previous = out.samples.empty() ? last : out.samples.back();
    const Sample* before = nullptr;
    if (out.samples.size() >= 2) {
      before = &out.samples[out.samples.size() - 2];
    } else if (out.samples.size() == 1) {
      before = &last;
    } else if (tail.size() >= 2) {
      before = &tail[tail.size() - 2];
    }
    const std::vector<Complex> target = before ? extrapolate(*before, previous, lambda) : previous.values;
    Sample next{lambda, match_branches(target, model.sample(lambda))};
    if (before && !continuous(model, *before, previous, next)) out.continuous = false;
    out.samples.push_back(std::move(next));
    if (model.unstable(out.samples.back().values)) {
      out.unstable = true;
      break;
    }
  }
  return out;
}

constexpr int kMaxRefinement = 64;
// Two branches closer than this fraction at a sampled local minimum of their
// gap are searched for a coalescence narrower than the sweep step.
constexpr double kNearMissGap = 0.05;

// Golden-section minimisation of the gap between sorted branches `pair` and
// `pair + 1` over [a, c]. Returns the first unstable sample met, if any.
std::optional<Sample> probe_near_miss(const SweepModel& model, const Sample& a, const Sample& c, std::size_t pair,
                                      double tol) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = a.lambda, hi = c.lambda;
  std::optional<Sample> hit;
  auto gap = [&](double lambda) {
    Sample s{lambda, model.sample(lambda)};
    if (model.unstable(s.values)) {
      if (!hit || lambda < hit->lambda) hit = std::move(s);
      return -1.0;
    }
    const std::vector<double> g = model.gaps(s.values);
    return pair < g.size() ? g[pair] : std::numeric_limits<double>::infinity();
  };
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = gap(x1), f2 = gap(x2);
  while (!hit && hi - lo > tol * hi) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = gap(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = gap(x2);
    }
  }
  return hit;
}

// Index of a neighbouring pair whose gap has a small local minimum at b.
std::optional<std::size_t> near_miss(const SweepModel& model, const Sample& a, const Sample& b, const Sample& c) {
  const std::vector<double> ga = model.gaps(a.values), gb = model.gaps(b.values), gc = model.gaps(c.values);
  if (ga.size() != gb.size() || gb.size() != gc.size()) return std::nullopt;
  for (std::size_t i = 0; i < gb.size(); ++i) {
    if (gb[i] < kNearMissGap && gb[i] < ga[i] && gb[i] <= gc[i]) return i;
  }
  return std::nullopt;
}

FlutterResult run_sweep(const SweepModel& model, const SweepConfig& cfg, bool damped) {
  cfg.validate();
  FlutterResult result;
  result.damped = damped;
  result.g_tau = damped ? cfg.g_tau : 0.0;

  std::vector<Sample> tail;  // last two accepted samples
  auto accept = [&](Sample sample) {
    result.history.push_back({sample.lambda, model.kappa(sample.values)});
    tail.push_back(std::move(sample));
    if (tail.size() > 2) tail.erase(tail.begin());
  };

  {
    Sample first{cfg.lambda_start, model.sample(cfg.lambda_start)};
    if (model.unstable(first.values)) throw NumericError("system is already unstable at the start of the sweep");
    accept(std::move(first));
  }

  double end = cfg.lambda_end;
  int extensions = 0;
  for (long step = 1;; ++step) {
    const double lambda = cfg.lambda_start + step * cfg.lambda_step;
    if (lambda > end * (1.0 + 1e-12)) {
      if (extensions >= cfg.max_extensions) return result;
      ++extensions;
      end = cfg.lambda_start + 2.0 * (end - cfg.lambda_start);
    }
    // Halve the step locally until every tracked branch moves smoothly.
    Walk w = walk(model, tail, lambda, 1);
    for (int parts = 2; !w.continuous && parts <= kMaxRefinement; parts *= 2) w = walk(model, tail, lambda, parts);
    if (!w.continuous) result.continuity_ok = false;
    std::optional<Sample> unstable;
    for (auto& sample : w.samples) {
      if (model.unstable(sample.values)) {
        unstable = std::move(sample);
        break;
      }
      if (tail.size() >= 2) {
        const Sample& a = tail[tail.size() - 2];
        const Sample& b = tail.back();
        if (const auto pair = near_miss(model, a, b, sample)) {
          if (auto hit = probe_near_miss(model, a, sample, *pair, cfg.bisection_tol)) {
            // The bracket must start from a stable sample below the hit.
            if (hit->lambda < b.lambda) {
              result.history.pop_back();
              tail.pop_back();
            }
            hit->values = match_branches(tail.back().values, hit->values);
            unstable = std::move(hit);
            break;
          }
        }
      }
      accept(std::move(sample));
    }
    if (!unstable) continue;

    double lo = tail.back().lambda, hi = unstable->lambda;
    std::vector<Complex> lo_values = tail.back().values, hi_values = unstable->values;
    result.history.push_back({hi, model.kappa(hi_values)});
    while (hi - lo > cfg.bisection_tol * hi) {
      const double mid = 0.5 * (lo + hi);
      std::vector<Complex> mid_values = match_branches(lo_values, model.sample(mid));
      if (model.unstable(mid_values)) {
        hi = mid;
        hi_values = std::move(mid_values);
      } else {
        lo = mid;
        lo_values = std::move(mid_values);
      }
    }
    result.found = true;
    result.lambda_cr = hi;
    result.bracket.lambda_lo = lo;
    result.bracket.lambda_hi = hi;
    const std::size_t count = model.count(hi_values);

    if (!damped) {
      // Most complex coalesced value and its conjugate partner.
      const auto& undamped = static_cast<const UndampedModel&>(model);
      std::size_t first = 0;
      double worst = -1.0;
      for (std::size_t i = 0; i < count; ++i) {
        if (!undamped.coalesced(hi_values, i)) continue;
        const double ratio = std::abs(hi_values[i].imag()) / std::abs(hi_values[i]);
        if (ratio > worst) {
          worst = ratio;
          first = i;
        }
      }
      std::size_t second = UndampedModel::partner(hi_values, first);
      if (second < first) std::swap(first, second);
      result.mode_pair = {static_cast<int>(first), static_cast<int>(second)};
      result.omega_cr_sq = 0.5 * (hi_values[first].real() + hi_values[second].real());
      result.bracket.below = {lo_values[first], lo_values[second]};
      result.bracket.above = {hi_values[first], hi_values[second]};
      const auto real = [&](Complex k) { return std::abs(k.imag()) <= cfg.coalescence_tol * std::abs(k); };
      const auto& below = result.bracket.below;
      const auto& above = result.bracket.above;
      const double scale = std::abs(above[0]);
      result.bracket.verified = real(below[0]) && real(below[1]) && below[0] != below[1] && !real(above[0]) &&
                                std::abs(above[0] - std::conj(above[1])) <= 1e-6 * scale;
    } else {
      std::size_t branch = 0;
      double best = -std::numeric_limits<double>::infinity();
      const auto& damped = static_cast<const DampedModel&>(model);
      for (std::size_t i = 0; i < hi_values.size(); ++i) {
        if (!damped.watched(hi_values, i)) continue;
        const double growth = hi_values[i].real() / std::abs(hi_values[i]);
        if (growth > best) {
          best = growth;
          branch = i;
        }
      }
      const Complex s_hi = hi_values[branch];
      Complex s_lo = lo_values.front();
      if (branch < lo_values.size()) {
        s_lo = lo_values[branch];
      } else {
        for (const Complex v : lo_values) {
          if (std::abs(v - s_hi) < std::abs(s_lo - s_hi)) s_lo = v;
        }
      }
      result.mode_pair = {static_cast<int>(branch), static_cast<int>(branch)};
      result.omega_cr_sq = s_hi.imag() * s_hi.imag();
      result.bracket.below = {model.to_kappa(s_lo), model.to_kappa(s_lo)};
      result.bracket.above = {model.to_kappa(s_hi), model.to_kappa(s_hi)};
      result.bracket.verified = !model.unstable_value(s_lo) && model.unstable_value(s_hi);
    }
    return result;
  }
}

}  // namespace

FlutterResult sweep_and_detect(const FlutterProblem& problem, const SweepConfig& cfg) {
  return run_sweep(UndampedModel(problem, cfg.n_modes_tracked, cfg.coalescence_tol), cfg, false);
}

FlutterResult sweep_and_detect(const Pencil& pencil, const SweepConfig& cfg) {
  return sweep_and_detect(FlutterProblem(pencil), cfg);
}

FlutterResult damped_flutter(const FlutterProblem& problem, const SweepConfig& cfg) {
  return run_sweep(DampedModel(problem, cfg.n_modes_tracked, cfg.coalescence_tol, cfg.g_tau), cfg, true);
}

FlutterResult damped_flutter(const Pencil& pencil, const SweepConfig& cfg) {
  return damped_flutter(FlutterProblem(pencil), cfg);
}

Normalization isotropic_normalization(double a, double h, double E, double nu, double rho) {
  const double D = E * h * h * h / (12.0 * (1.0 - nu * nu));
  const double pi4 = std::pow(std::numbers::pi, 4);
  Normalization n;
  n.lambda_factor = a * a * a / (pi4 * D);
  n.omega_sq_factor = std::pow(a, 4) * rho * h / D;
  n.damping_factor = a * a / std::sqrt(rho * h * D);
  return n;
}

Normalization reference_normalization(double a, double h, double E_ref, double nu, double rho_ref) {
  const double D = E_ref * h * h * h / (12.0 * (1.0 - nu * nu));
  Normalization n;
  n.lambda_factor = a * a * a / D;
  n.omega_sq_factor = std::pow(a, 4) * rho_ref * h / D;
  n.damping_factor = a * a / std::sqrt(rho_ref * h * D);
  return n;
}

FlutterResult normalize(const FlutterResult& result, const Normalization& norm) {
  FlutterResult out = result;
  out.lambda_cr *= norm.lambda_factor;
  out.omega_cr_sq *= norm.omega_sq_factor;
  out.g_tau *= norm.damping_factor;
  out.bracket.lambda_lo *= norm.lambda_factor;
  out.bracket.lambda_hi *= norm.lambda_factor;
  for (auto& k : out.bracket.below) k *= norm.omega_sq_factor;
  for (auto& k : out.bracket.above) k *= norm.omega_sq_factor;
  for (auto& sample : out.history) {
    sample.lambda *= norm.lambda_factor;
    for (auto& k : sample.kappa) k *= norm.omega_sq_factor;
  }
  return out;
}

void write_branch_csv(std::ostream& out, const FlutterResult& result) {
  const auto precision = out.precision();
  out << std::setprecision(12);
  out << "lambda,mode_index,re_kappa,im_kappa\n";
  for (const auto& sample : result.history) {
    for (std::size_t i = 0; i < sample.kappa.size(); ++i) {
      out << sample.lambda << ',' << i << ',' << sample.kappa[i].real() << ',' << sample.kappa[i].imag() << '\n';
    }
  }
  out.precision(precision);
}

}  // namespace fgflutter
