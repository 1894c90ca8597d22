#include "cli/commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <thread>

#include "cli/csv.hpp"
#include "saext/errors.hpp"
#include "saext/oracle.hpp"

namespace saext::cli {

namespace {

std::ostream& log_of(const RunContext& ctx) {
  static std::ofstream null;
  return ctx.log ? *ctx.log : null;
}

SolveOptions solve_options(const JobConfig& c) {
  SolveOptions o;
  o.resolution = c.resolution;
  o.mu = c.mu;
  o.quadrature_order = c.quadrature_order;
  o.kappa_max = c.kappa_max;
  o.max_retries = c.max_retries;
  o.levels = c.levels;
  return o;
}

}  // namespace

int worker_count() {
  if (const char* env = std::getenv("SAEXT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void cmd_solve(const JobConfig& config, const RunContext& ctx) {
  std::ostream& log = log_of(ctx);
  const IntervalSet geometry = make_geometry(config);
  const SolveResult r = solve_problem(geometry, make_boundary(config), make_potential(config), solve_options(config));
  const Mesh& mesh = r.discretization.mesh;
  if (mesh.resolution() != config.resolution)
    log << "note: boundary matrix ill-conditioned at N=" << config.resolution << ", solved at N=" << mesh.resolution()
        << "\n";

  CsvWriter csv(ctx.out_dir / "spectrum.csv", {"index", "lambda", "residual"});
  log << "  k  lambda                    residual\n";
  for (int k = 0; k < r.solution.count(); ++k) {
    csv.field(k + 1).field(r.solution.eigenvalues(k)).field(r.solution.residuals(k));
    csv.end_row();
    log << std::setw(3) << k + 1 << "  " << std::setw(24) << std::setprecision(15) << r.solution.eigenvalues(k)
        << "  " << std::setprecision(3) << r.solution.residuals(k) << "\n";
  }
  csv.close();

  if (!config.write_eigenfunctions) return;
  for (int k = 0; k < r.solution.count(); ++k) {
    CsvWriter ef(ctx.out_dir / ("eigenfunction_" + std::to_string(k + 1) + ".csv"), {"interval", "x", "re", "im"});
    for (const NodeSample& s :
         eigenfunction_samples(r.solution, mesh, r.discretization.values, k, config.eigenfunction_midpoints)) {
      ef.field(s.alpha).field(s.x).field(s.value.real()).field(s.value.imag());
      ef.end_row();
    }
    ef.close();
  }
}

void cmd_oracle(const JobConfig& config, const RunContext& ctx) {
  std::ostream& log = log_of(ctx);
  const IntervalSet geometry = make_geometry(config);
  const BoundaryCondition bc = make_boundary(config);
  const Potential potential = make_potential(config);
  SpectrumOptions opts;
  opts.mu = config.mu;
  opts.grid_density = config.oracle_density;

  std::vector<SpectralRoot> roots;
  if (!config.oracle_range.empty()) {
    opts.lambda_min = config.oracle_range[0];
    opts.lambda_max = config.oracle_range[1];
    const SpectrumResult res = find_spectrum(bc, potential, geometry, opts);
    roots = res.roots;
    for (const auto& w : res.warnings) log << "warning: " << w << "\n";
    if (config.oracle_scan) {
      CsvWriter scan(ctx.out_dir / "scan.csv", {"lambda", "abs", "re", "im"});
      for (const ScanPoint& p : scan_spectral_function(bc, potential, geometry, opts)) {
        scan.field(p.lambda).field(std::abs(p.det)).field(p.det.real()).field(p.det.imag());
        scan.end_row();
      }
      scan.close();
    }
  } else {
    for (double l : lowest_spectrum(bc, potential, geometry, config.levels, opts)) {
      if (!roots.empty() && roots.back().lambda == l) {
        ++roots.back().multiplicity;
      } else {
        roots.push_back({l, 1, 0.0, 0.0});
      }
    }
  }

  CsvWriter csv(ctx.out_dir / "roots.csv", {"index", "lambda", "multiplicity"});
  int index = 0;
  for (const SpectralRoot& r : roots) {
    csv.field(++index).field(r.lambda).field(r.multiplicity);
    csv.end_row();
    log << std::setw(3) << index << "  " << std::setprecision(15) << r.lambda
        << (r.multiplicity > 1 ? "  (x" + std::to_string(r.multiplicity) + ")" : std::string()) << "\n";
  }
  csv.close();
}

void cmd_convergence(const JobConfig& config, const RunContext& ctx) {
  std::ostream& log = log_of(ctx);
  const ConvergenceStudy study = dirichlet_convergence(config.resolutions, config.mu, ctx.threads);
  CsvWriter csv(ctx.out_dir / "convergence.csv", {"N", "h1_error", "eigenvalue", "eigenvalue_error"});
  for (const ConvergenceRow& row : study.rows) {
    csv.field(row.resolution).field(row.h1_error).field(row.eigenvalue).field(row.eigenvalue_error);
    csv.end_row();
    log << std::setw(6) << row.resolution << "  " << std::setprecision(6) << row.h1_error << "  "
        << row.eigenvalue_error << "\n";
  }
  if (study.h1_fit) {
    csv.field("slope_h1").field(study.h1_fit->slope).field(study.h1_fit->slope_stderr).empty();
    csv.end_row();
    log << "H1 slope " << study.h1_fit->slope << " +- " << study.h1_fit->slope_stderr << "\n";
  } else {
    csv.field("insufficient-data").empty().empty().empty();
    csv.end_row();
    log << "insufficient data for a fit\n";
  }
  if (study.eigenvalue_fit) {
    csv.field("slope_eigenvalue").field(study.eigenvalue_fit->slope).field(study.eigenvalue_fit->slope_stderr).empty();
    csv.end_row();
  }
  csv.close();
}

void cmd_stability(const JobConfig& config, const RunContext& ctx) {
  std::ostream& log = log_of(ctx);
  const StabilityStudy study = stability_study(make_geometry(config), make_boundary(config), make_potential(config),
                                               config.epsilons, make_stability_options(config, ctx.threads));
  CsvWriter csv(ctx.out_dir / "stability.csv",
                {"epsilon", "level", "lambda0", "lambda", "K", "status", "defect_before", "polar_distance"});
  for (const StabilityRow& row : study.rows) {
    csv.field(row.epsilon).field(row.level).field(row.lambda0);
    if (row.status == "undefined epsilon") {
      csv.empty().empty();
    } else if (row.status == "ill-conditioned ratio") {
      csv.field(row.lambda).empty();
    } else {
      csv.field(row.lambda).field(row.k);
    }
    csv.field(row.status).field(row.defect_before).field(row.polar_distance);
    csv.end_row();
  }
  for (const LevelFit& lf : study.fits) {
    if (lf.fit) {
      csv.field("fit").field(lf.level).field(lf.fit->a).field(lf.fit->b).field(lf.fit->c).field(lf.fit->b_stderr)
          .field(lf.fit->rms).empty();
      log << "level " << lf.level << ": K = " << std::setprecision(4) << lf.fit->a << " eps^" << lf.fit->b << " + "
          << lf.fit->c << "  (b +- " << lf.fit->b_stderr << ")\n";
    } else {
      csv.field("fit").field(lf.level).field("insufficient-data").empty().empty().empty().empty().empty();
      log << "level " << lf.level << ": insufficient data for a fit\n";
    }
    csv.end_row();
  }
  csv.close();
}

void cmd_condition(const JobConfig& config, const RunContext& ctx) {
  std::ostream& log = log_of(ctx);
  const IntervalSet geometry = make_geometry(config);
  const BoundaryCondition bc = make_boundary(config);
  CsvWriter csv(ctx.out_dir / "condition.csv", {"N", "kappa", "bound", "spectrum_gap", "compatible"});
  for (int k = 0; k <= config.max_retries; ++k) {
    const int n = config.resolution + k;
    const ConditionReport rep = condition_report(assemble_boundary_system(bc, build_mesh(geometry, n)));
    csv.field(n).field(rep.kappa_estimate).field(rep.bound).field(rep.spectrum_gap).field(rep.compatible ? "true" : "false");
    csv.end_row();
    log << "N=" << n << "  kappa(F) = " << std::setprecision(6) << rep.kappa_estimate << "  bound = " << rep.bound
        << "  min|1-spec(U0)| = " << rep.spectrum_gap << (rep.compatible ? "" : "  (incompatible)") << "\n";
    if (rep.compatible && rep.kappa_estimate <= config.kappa_max) break;
  }
  csv.close();
}

int run_command(const std::string& name, const JobConfig& config, const RunContext& ctx, std::ostream& err) {
  try {
    std::error_code ec;
    std::filesystem::create_directories(ctx.out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + ctx.out_dir.string() + ": " + ec.message());
    {
      std::ofstream echo(ctx.out_dir / "config.resolved.yaml", std::ios::binary | std::ios::trunc);
      echo << echo_config(config);
      if (!echo) throw IoError("cannot write " + (ctx.out_dir / "config.resolved.yaml").string());
    }
    if (name == "solve") cmd_solve(config, ctx);
    else if (name == "oracle") cmd_oracle(config, ctx);
    else if (name == "convergence") cmd_convergence(config, ctx);
    else if (name == "stability") cmd_stability(config, ctx);
    else if (name == "condition") cmd_condition(config, ctx);
    else throw ValidationError("unknown command '" + name + "'");
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ConditionFailure& e) {
    err << "conditioning failure: " << e.what() << "\n";
    for (const auto& a : e.history())
      err << "  N=" << a.resolution << " kappa=" << a.kappa_estimate << " gap=" << a.spectrum_gap << "\n";
    return kExitConditioning;
  } catch (const EigenFailure& e) {
    err << "eigensolver failure: " << e.what();
    if (e.pivot() >= 0) err << " (pivot " << e.pivot() << ")";
    err << "\n";
    return kExitEigensolver;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace saext::cli
