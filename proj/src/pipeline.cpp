#include "fgflutter/pipeline.hpp"

#include "fgflutter/error.hpp"
#include "fgflutter/material_io.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

namespace fgflutter {

std::vector<CaseSpec> expand_cases(const RunConfig& config) {
  std::vector<CaseSpec> out;
  for (BoundaryCondition bc : config.bc)
    for (double ab : config.aspect_ratio)
      for (double ah : config.thickness_ratio)
        for (double psi : config.skew_deg)
          for (double r : config.cutout_ratio)
            for (double n : config.gradient_index)
              for (const auto& [tc, tm] : config.temperatures) out.push_back({bc, ab, ah, psi, r, n, tc, tm});
  return out;
}

ConstituentSet resolve_constituents(const RunConfig& config) {
  std::map<std::string, Constituent> user;
  if (config.material_file) user = load_materials_file(*config.material_file);
  return {find_material(config.ceramic, user), find_material(config.metal, user)};
}

Normalization case_normalization(const RunConfig& config, const ConstituentSet& constituents, double h) {
  const double T0 = config.reference_temperature;
  switch (config.normalization) {
    case NormalizationMode::fgm:
      return reference_normalization(config.a, h, property_at_temperature(constituents.metal.E, T0), config.nu,
                                     constituents.metal.rho);
    case NormalizationMode::ceramic:
      return reference_normalization(config.a, h, constituents.ceramic.E.P0, config.nu, constituents.ceramic.rho);
    case NormalizationMode::isotropic:
      return isotropic_normalization(config.a, h, property_at_temperature(constituents.ceramic.E, T0), config.nu,
                                     constituents.ceramic.rho);
  }
  throw std::logic_error("unhandled normalization mode");
}

PlateModel build_model(const RunConfig& config, const ConstituentSet& constituents, const CaseSpec& spec,
                       int workers) {
  PlateModel model;
  const double a = config.a, b = a / spec.aspect_ratio;
  model.h = a / spec.thickness_ratio;

  FGMSection& s = model.section;
  s.constituents = constituents;
  s.n = spec.n;
  s.h = model.h;
  s.Tc = spec.Tc;
  s.Tm = spec.Tm;
  s.T0 = config.reference_temperature;
  s.quadrature_points = config.quadrature_points;
  if (config.shear_correction) {
    const double v = std::sqrt(*config.shear_correction);
    s.shear_correction = {v, v};
  }
  s.poisson_mode = config.poisson_mode;
  s.nu = config.nu;
  s.validate();
  model.properties = section_properties(s);

  model.mesh = spec.cutout_ratio > 0.0 ? cutout_mesh(a, b, spec.cutout_ratio * a, config.cutout_refinement)
                                       : structured_rect_mesh(a, b, config.nx, config.ny, config.pattern);
  if (spec.skew_deg != 0.0) model.mesh = apply_skew(std::move(model.mesh), spec.skew_deg * std::numbers::pi / 180.0);

  // Heating the section produces compressive in-plane resultants.
  const Eigen::Vector3d prestress = -model.properties.Nth;
  const auto elements = plate_element_matrices(model.mesh, model.properties, prestress,
                                               config.flow_angle_deg * std::numbers::pi / 180.0, workers,
                                               config.shear_stabilization);
  model.system = apply_bc(apply_skew_transform(assemble(model.mesh, elements), model.mesh), model.mesh, spec.bc);
  model.normalization = case_normalization(config, constituents, model.h);
  return model;
}

std::string to_string(CaseStatus status) {
  switch (status) {
    case CaseStatus::ok: return "ok";
    case CaseStatus::no_flutter: return "no-flutter";
    case CaseStatus::failed: return "failed";
  }
  return "?";
}

std::vector<CaseResult> run_case(const RunConfig& config, const ConstituentSet& constituents, const CaseSpec& spec,
                                 std::span<const double> damping, int workers) {
  std::vector<CaseResult> rows(damping.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].spec = spec;
    rows[i].damping = damping[i];
  }
  auto fail_all = [&](const std::string& message) {
    for (auto& row : rows) {
      row.status = CaseStatus::failed;
      row.message = message;
    }
    return rows;
  };

  PlateModel model;
  Pencil pencil;
  try {
    model = build_model(config, constituents, spec, workers);
    if (config.solver == SolverRoute::modal) {
      ModalBasisOptions options;
      options.modes = config.basis_modes;
      const ModalBasis basis = lowest_modes(model.system.K + model.system.KG, model.system.M, options);
      pencil = project(model.system, basis);
    } else {
      pencil = dense_pencil(model.system);
    }
  } catch (const ConfigurationError&) {
    throw;
  } catch (const std::exception& e) {
    return fail_all(e.what());
  }

  const Normalization& norm = model.normalization;
  SweepConfig sweep;
  sweep.lambda_start = config.lambda_start / norm.lambda_factor;
  sweep.lambda_end = config.lambda_end / norm.lambda_factor;
  sweep.lambda_step = (sweep.lambda_end - sweep.lambda_start) / config.steps;
  sweep.n_modes_tracked = config.modes_tracked;
  sweep.coalescence_tol = config.coalescence_tol;
  sweep.bisection_tol = config.bisection_tol;
  sweep.max_extensions = config.extensions;

  std::optional<FlutterProblem> problem;
  double omega1 = std::numeric_limits<double>::quiet_NaN(), omega2 = omega1;
  try {
    problem.emplace(pencil);
    const Eigen::VectorXcd vacuo = problem->eigenvalues(0.0);
    if (vacuo.size() >= 2) {
      omega1 = vacuo(0).real() * norm.omega_sq_factor;
      omega2 = vacuo(1).real() * norm.omega_sq_factor;
    }
    if (vacuo.size() > 0 && vacuo(0).real() <= 0.0) {
      return fail_all("thermally buckled: lowest in-vacuo eigenvalue is not positive");
    }
  } catch (const std::exception& e) {
    return fail_all(e.what());
  }

  for (auto& row : rows) {
    row.dofs = model.system.size();
    row.omega1_sq = omega1;
    row.omega2_sq = omega2;
    try {
      FlutterResult raw;
      if (row.damping == 0.0) {
        raw = sweep_and_detect(*problem, sweep);
      } else {
        SweepConfig damped = sweep;
        damped.damped = true;
        damped.g_tau = row.damping / norm.damping_factor;
        raw = damped_flutter(*problem, damped);
      }
      row.flutter = normalize(raw, norm);
      row.status = raw.found ? CaseStatus::ok : CaseStatus::no_flutter;
      if (raw.found && !raw.bracket.verified) row.message = "coalescence bracket not verified";
      if (!raw.continuity_ok) row.message += std::string(row.message.empty() ? "" : "; ") + "branch continuity warning";
    } catch (const ConfigurationError&) {
      throw;
    } catch (const std::exception& e) {
      row.status = CaseStatus::failed;
      row.message = e.what();
    }
  }
  return rows;
}

namespace {

std::string describe(const CaseSpec& s) {
  std::ostringstream out;
  out << to_string(s.bc) << " a/b=" << s.aspect_ratio << " a/h=" << s.thickness_ratio << " psi=" << s.skew_deg
      << " r/a=" << s.cutout_ratio << " n=" << s.n << " T=" << s.Tc << '/' << s.Tm;
  return out.str();
}

}  // namespace

std::vector<CaseResult> run_all(const RunConfig& config, const RunOptions& options) {
  config.validate();
  const ConstituentSet constituents = resolve_constituents(config);
  const std::vector<CaseSpec> cases = expand_cases(config);
  std::vector<std::vector<CaseResult>> slots(cases.size());
  const int pool = std::max(1, std::min<int>(options.workers, static_cast<int>(cases.size())));
  const int inner = std::max(1, options.workers / pool);

  std::mutex log_mutex;
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) {
      try {
        slots[i] = run_case(config, constituents, cases[i], config.damping, inner);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
      if (options.log && options.verbosity > 0) {
        std::lock_guard lock(log_mutex);
        for (const auto& row : slots[i]) {
          *options.log << "[" << (i + 1) << "/" << cases.size() << "] " << describe(row.spec) << " g=" << row.damping
                       << ": " << to_string(row.status);
          if (row.status == CaseStatus::ok) *options.log << " lambda_cr=" << row.flutter.lambda_cr;
          if (!row.message.empty()) *options.log << " (" << row.message << ")";
          *options.log << '\n';
        }
      }
    }
  };
  std::vector<std::thread> threads;
  for (int w = 1; w < pool; ++w) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);

  std::vector<CaseResult> out;
  for (auto& slot : slots) {
    for (auto& row : slot) out.push_back(std::move(row));
  }
  return out;
}

namespace {

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string mode_label(int index) { return index < 0 ? "" : std::to_string(index + 1); }

}  // namespace

void write_results_csv(std::ostream& out, const RunConfig& config, std::span<const CaseResult> results) {
  const auto precision = out.precision();
  out << std::setprecision(10);
  out << "case,bc,aspect_ratio,thickness_ratio,skew_deg,cutout_ratio,gradient_index,Tc,Tm,damping,normalization,"
         "ceramic,metal,mesh,dofs,status,lambda_cr,omega_cr_sq,mode_a,mode_b,omega1_sq,omega2_sq,bracket_verified,"
         "continuity_ok,message\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const CaseResult& r = results[i];
    const CaseSpec& s = r.spec;
    std::ostringstream mesh;
    if (s.cutout_ratio > 0.0) {
      mesh << "cutout-r" << config.cutout_refinement;
    } else {
      mesh << config.nx << 'x' << config.ny;
    }
    out << (i + 1) << ',' << to_string(s.bc) << ',' << s.aspect_ratio << ',' << s.thickness_ratio << ','
        << s.skew_deg << ',' << s.cutout_ratio << ',' << s.n << ',' << s.Tc << ',' << s.Tm << ',' << r.damping << ','
        << to_string(config.normalization) << ',' << csv_field(config.ceramic) << ',' << csv_field(config.metal)
        << ',' << mesh.str() << ',' << r.dofs << ',' << to_string(r.status) << ',';
    if (r.status == CaseStatus::ok) {
      out << r.flutter.lambda_cr << ',' << r.flutter.omega_cr_sq << ',' << mode_label(r.flutter.mode_pair[0]) << ','
          << mode_label(r.flutter.mode_pair[1]);
    } else {
      out << ",,,";
    }
    out << ',' << r.omega1_sq << ',' << r.omega2_sq << ','
        << (r.status == CaseStatus::ok ? (r.flutter.bracket.verified ? "yes" : "no") : "") << ','
        << (r.status == CaseStatus::failed ? "" : (r.flutter.continuity_ok ? "yes" : "no")) << ','
        << csv_field(r.message) << '\n';
  }
  out.precision(precision);
}

void write_report(std::ostream& out, const RunConfig& config, std::span<const CaseResult> results) {
  out << "Flutter run: " << config.ceramic << " / " << config.metal << ", normalization " << to_string(config.normalization)
      << ", mesh " << config.nx << 'x' << config.ny << " (cutout refinement " << config.cutout_refinement << "), "
      << (config.solver == SolverRoute::modal ? "modal basis of " + std::to_string(config.basis_modes) + " modes"
                                              : std::string("dense reduced system"))
      << "\n\n";
  out << std::left << std::setw(5) << "case" << std::setw(6) << "bc" << std::setw(8) << "a/b" << std::setw(8) << "a/h"
      << std::setw(7) << "psi" << std::setw(7) << "r/a" << std::setw(6) << "n" << std::setw(10) << "Tc/Tm"
      << std::setw(8) << "g" << std::setw(12) << "status" << std::right << std::setw(14) << "lambda_cr"
      << std::setw(14) << "omega_cr^2" << std::setw(8) << "modes" << '\n';
  int failures = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const CaseResult& r = results[i];
    const CaseSpec& s = r.spec;
    std::ostringstream temps;
    temps << s.Tc << '/' << s.Tm;
    out << std::left << std::setw(5) << (i + 1) << std::setw(6) << to_string(s.bc) << std::setw(8) << s.aspect_ratio
        << std::setw(8) << s.thickness_ratio << std::setw(7) << s.skew_deg << std::setw(7) << s.cutout_ratio
        << std::setw(6) << s.n << std::setw(10) << temps.str() << std::setw(8) << r.damping << std::setw(12)
        << to_string(r.status) << std::right << std::fixed << std::setprecision(4);
    if (r.status == CaseStatus::ok) {
      out << std::setw(14) << r.flutter.lambda_cr << std::setw(14) << r.flutter.omega_cr_sq << std::setw(8)
          << (mode_label(r.flutter.mode_pair[0]) + "-" + mode_label(r.flutter.mode_pair[1]));
    } else {
      out << std::setw(14) << "-" << std::setw(14) << "-" << std::setw(8) << "-";
    }
    out.unsetf(std::ios::floatfield);
    out << std::setprecision(6);
    if (!r.message.empty()) out << "  " << r.message;
    out << '\n';
    if (r.status == CaseStatus::failed) ++failures;
  }
  out << '\n' << results.size() << " rows, " << failures << " failed\n";
}

int write_run_outputs(const std::filesystem::path& directory, const RunConfig& config,
                      std::span<const CaseResult> results) {
  std::filesystem::create_directories(directory / "branches");
  auto open = [](const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
  };
  {
    auto out = open(directory / "results.csv");
    write_results_csv(out, config, results);
  }
  {
    auto out = open(directory / "report.txt");
    write_report(out, config, results);
  }
  {
    auto out = open(directory / "config.ini");
    write_run_config(out, config);
  }
  int failures = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].status == CaseStatus::failed) {
      ++failures;
      continue;
    }
    std::ostringstream name;
    name << "case_" << std::setw(4) << std::setfill('0') << (i + 1) << ".csv";
    auto out = open(directory / "branches" / name.str());
    write_branch_csv(out, results[i].flutter);
  }
  return failures;
}

}  // namespace fgflutter
