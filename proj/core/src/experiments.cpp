#include "saext/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "saext/errors.hpp"

namespace saext {

SolveResult solve_problem(const IntervalSet& geometry, const BoundaryCondition& bc, const Potential& potential,
                          const SolveOptions& options) {
  if (bc.interval_count() != geometry.size())
    throw ValidationError("boundary matrix size does not match the number of intervals");
  potential.check_compatible(geometry);
  Discretization disc =
      retry_mesh_on_bad_conditioning(bc, geometry, options.resolution, options.kappa_max, options.max_retries);
  Pencil pencil = assemble_pencil(disc.mesh, disc.values, potential, {options.mu, options.quadrature_order});
  EigenSolution solution = solve_pencil(pencil, options.levels);
  return {std::move(disc), std::move(pencil), std::move(solution)};
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ValidationError("fit_line: size mismatch");
  const auto m = static_cast<int>(x.size());
  if (m < 2) throw ValidationError("fit_line: need at least two points");
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < m; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw ValidationError("fit_line: abscissae are all equal");
  LinearFit fit;
  fit.points = m;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (m > 2) {
    double ssr = 0.0;
    for (int i = 0; i < m; ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      ssr += r * r;
    }
    const double s2 = ssr / (m - 2);
    fit.slope_stderr = std::sqrt(s2 / sxx);
    fit.intercept_stderr = std::sqrt(s2 * (1.0 / m + mx * mx / sxx));
  }
  return fit;
}

LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ValidationError("fit_loglog: values must be positive");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return fit_line(lx, ly);
}

namespace {

struct ProfilePoint {
  double a = 0.0;
  double c = 0.0;
  double ssr = std::numeric_limits<double>::infinity();
};

ProfilePoint profile(const std::vector<double>& eps, const std::vector<double>& k, double b) {
  const auto m = static_cast<Eigen::Index>(eps.size());
  Eigen::MatrixXd x(m, 2);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    x(i, 0) = std::pow(eps[static_cast<std::size_t>(i)], b);
    x(i, 1) = 1.0;
    y(i) = k[static_cast<std::size_t>(i)];
  }
  const double scale = x.col(0).cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || !std::isfinite(scale)) return {};
  x.col(0) /= scale;
  const Eigen::Vector2d coef = x.colPivHouseholderQr().solve(y);
  ProfilePoint p;
  p.a = coef(0) / scale;
  p.c = coef(1);
  p.ssr = (x * coef - y).squaredNorm();
  return p;
}

}  // namespace

std::optional<PowerLawFit> fit_power_law(const std::vector<double>& eps, const std::vector<double>& k, double b_min,
                                         double b_max) {
  if (eps.size() != k.size()) throw ValidationError("fit_power_law: size mismatch");
  if (eps.size() < 4) return std::nullopt;
  for (double e : eps)
    if (!(e > 0.0)) throw ValidationError("fit_power_law: epsilons must be positive");

  const double step = 0.01;
  double best_b = b_min;
  double best = std::numeric_limits<double>::infinity();
  for (double b = b_min; b <= b_max + 0.5 * step; b += step) {
    const double ssr = profile(eps, k, b).ssr;
    if (ssr < best) {
      best = ssr;
      best_b = b;
    }
  }
  double lo = std::max(b_min, best_b - step), hi = std::min(b_max, best_b + step);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = profile(eps, k, x1).ssr, f2 = profile(eps, k, x2).ssr;
  while (hi - lo > 1e-10) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = profile(eps, k, x1).ssr;
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = profile(eps, k, x2).ssr;
    }
  }
  const double b = 0.5 * (lo + hi);
  const ProfilePoint p = profile(eps, k, b);

  PowerLawFit fit;
  fit.a = p.a;
  fit.b = b;
  fit.c = p.c;
  const auto m = static_cast<Eigen::Index>(eps.size());
  fit.points = static_cast<int>(m);
  fit.rms = std::sqrt(p.ssr / static_cast<double>(m));

  Eigen::MatrixXd jac(m, 3);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double e = eps[static_cast<std::size_t>(i)];
    const double eb = std::pow(e, b);
    jac(i, 0) = eb;
    jac(i, 1) = p.a * eb * std::log(e);
    jac(i, 2) = 1.0;
  }
  const Eigen::Matrix3d jtj = jac.transpose() * jac;
  Eigen::FullPivLU<Eigen::Matrix3d> lu(jtj);
  if (m > 3 && lu.isInvertible()) {
    const double s2 = p.ssr / static_cast<double>(m - 3);
    const double var = s2 * lu.inverse()(1, 1);
    fit.b_stderr = var >= 0.0 ? std::sqrt(var) : std::numeric_limits<double>::infinity();
  } else {
    fit.b_stderr = std::numeric_limits<double>::infinity();
  }
  return fit;
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  const int workers = std::clamp(threads, 1, count);
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex mutex;
  int failed_index = count;
  std::exception_ptr failure;
  auto work = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

ConvergenceStudy dirichlet_convergence(const std::vector<int>& resolutions, double mu, int threads) {
  const IntervalSet geometry({{0.0, 2.0 * std::numbers::pi}});
  const BoundaryCondition bc = preset_dirichlet(1);
  const Potential potential = Potential::zero();
  const double exact = mu / 4.0;
  const double norm = 1.0 / std::sqrt(std::numbers::pi);
  const ReferenceFunction reference{
      [norm](int, double x) { return Complex(norm * std::sin(x / 2.0)); },
      [norm](int, double x) { return Complex(0.5 * norm * std::cos(x / 2.0)); },
  };

  ConvergenceStudy study;
  study.rows.resize(resolutions.size());
  parallel_for(static_cast<int>(resolutions.size()), threads, [&](int i) {
    SolveOptions opts;
    opts.resolution = resolutions[static_cast<std::size_t>(i)];
    opts.mu = mu;
    opts.levels = 1;
    const SolveResult r = solve_problem(geometry, bc, potential, opts);
    ConvergenceRow& row = study.rows[static_cast<std::size_t>(i)];
    row.resolution = opts.resolution;
    row.dimension = r.discretization.mesh.dim();
    row.eigenvalue = r.solution.eigenvalues(0);
    row.eigenvalue_error = std::abs(row.eigenvalue - exact);
    row.h1_error = h1_error(r.solution, 0, r.discretization.mesh, r.discretization.values, reference);
  });

  if (study.rows.size() >= 2) {
    std::vector<double> n, e1, e0;
    for (const auto& row : study.rows) {
      n.push_back(row.resolution);
      e1.push_back(row.h1_error);
      e0.push_back(row.eigenvalue_error);
    }
    study.h1_fit = fit_loglog(n, e1);
    if (std::all_of(e0.begin(), e0.end(), [](double e) { return e > 0.0; })) study.eigenvalue_fit = fit_loglog(n, e0);
  }
  return study;
}

CMatrix default_perturbation_direction(int dim) {
  if (dim <= 0 || dim % 2 != 0) throw ValidationError("perturbation direction needs an even dimension");
  CMatrix a = CMatrix::Zero(dim, dim);
  for (int i = 0; i < dim; i += 2) {
    a(i, i + 1) = 1.0;
    a(i + 1, i) = -1.0;
  }
  return a;
}

PerturbedMatrix perturb_boundary_matrix(const CMatrix& u, const CMatrix& direction, double eps,
                                        PerturbationMode mode) {
  if (direction.rows() != u.rows() || direction.cols() != u.cols())
    throw ValidationError("perturbation direction has the wrong shape");
  PerturbedMatrix out;
  if (mode == PerturbationMode::Linear) {
    const CMatrix raw = u + kI * eps * direction;
    out.defect_before = unitarity_defect(raw);
    out.u = nearest_unitary(raw);
    out.polar_distance = (out.u - raw).norm();
    return out;
  }
  const CMatrix w = u.adjoint() * direction;
  const CMatrix h = 0.5 * (w + w.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  CVector phases(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) phases(i) = std::exp(kI * (eps * es.eigenvalues()(i)));
  out.u = u * es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  out.defect_before = unitarity_defect(out.u);
  return out;
}

namespace {

std::vector<double> match_levels(const std::vector<double>& base, const RVector& perturbed,
                                 const std::vector<int>& levels, LevelMatching matching) {
  std::vector<double> out;
  if (matching == LevelMatching::SortedIndex) {
    for (int l : levels) out.push_back(perturbed(l));
    return out;
  }
  std::vector<bool> used(static_cast<std::size_t>(perturbed.size()), false);
  for (int l : levels) {
    Eigen::Index best = -1;
    for (Eigen::Index j = 0; j < perturbed.size(); ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      if (best < 0 || std::abs(perturbed(j) - base[static_cast<std::size_t>(l)]) <
                          std::abs(perturbed(best) - base[static_cast<std::size_t>(l)]))
        best = j;
    }
    used[static_cast<std::size_t>(best)] = true;
    out.push_back(perturbed(best));
  }
  return out;
}

}  // namespace

StabilityStudy stability_study(const IntervalSet& geometry, const BoundaryCondition& base, const Potential& potential,
                               const std::vector<double>& epsilons, const StabilityOptions& options) {
  if (options.levels.empty()) throw ValidationError("stability study needs at least one level");
  for (int l : options.levels)
    if (l < 0) throw ValidationError("stability levels are 0-based and non-negative");
  for (double e : epsilons)
    if (e < 0.0 || !std::isfinite(e)) throw ValidationError("stability epsilons must be non-negative");

  const int max_level = *std::max_element(options.levels.begin(), options.levels.end());
  SolveOptions solve;
  solve.resolution = options.resolution;
  solve.mu = options.mu;
  solve.quadrature_order = options.quadrature_order;
  solve.levels = max_level + 3;

  const SolveResult r0 = solve_problem(geometry, base, potential, solve);
  if (r0.solution.count() <= max_level) throw ValidationError("requested level exceeds the discrete spectrum");
  StabilityStudy study;
  for (Eigen::Index i = 0; i < r0.solution.eigenvalues.size(); ++i)
    study.base_spectrum.push_back(r0.solution.eigenvalues(i));

  const CMatrix direction =
      options.direction ? *options.direction : default_perturbation_direction(2 * geometry.size());
  const std::size_t nl = options.levels.size();
  study.rows.resize(epsilons.size() * nl);

  parallel_for(static_cast<int>(epsilons.size()), options.threads, [&](int ie) {
    const double eps = epsilons[static_cast<std::size_t>(ie)];
    StabilityRow* rows = &study.rows[static_cast<std::size_t>(ie) * nl];
    for (std::size_t j = 0; j < nl; ++j) {
      rows[j].epsilon = eps;
      rows[j].level = options.levels[j];
      rows[j].lambda0 = study.base_spectrum[static_cast<std::size_t>(options.levels[j])];
      rows[j].k = std::numeric_limits<double>::quiet_NaN();
      rows[j].lambda = std::numeric_limits<double>::quiet_NaN();
    }
    if (eps == 0.0) {
      for (std::size_t j = 0; j < nl; ++j) rows[j].status = "undefined epsilon";
      return;
    }
    const PerturbedMatrix pm = perturb_boundary_matrix(base.endpoint_matrix(), direction, eps, options.mode);
    const BoundaryCondition bc = BoundaryCondition::from_matrix(pm.u, Ordering::Endpoint);
    const SolveResult r = solve_problem(geometry, bc, potential, solve);
    const std::vector<double> lambdas =
        match_levels(study.base_spectrum, r.solution.eigenvalues, options.levels, options.matching);
    for (std::size_t j = 0; j < nl; ++j) {
      rows[j].lambda = lambdas[j];
      rows[j].defect_before = pm.defect_before;
      rows[j].polar_distance = pm.polar_distance;
      if (std::abs(rows[j].lambda0) < 1e-6) {
        rows[j].status = "ill-conditioned ratio";
        continue;
      }
      rows[j].k = std::abs(rows[j].lambda - rows[j].lambda0) / (eps * std::abs(rows[j].lambda0));
    }
  });

  for (std::size_t j = 0; j < nl; ++j) {
    std::vector<double> e, k;
    for (std::size_t ie = 0; ie < epsilons.size(); ++ie) {
      const StabilityRow& row = study.rows[ie * nl + j];
      if (row.status != "ok") continue;
      e.push_back(row.epsilon);
      k.push_back(row.k);
    }
    study.fits.push_back({options.levels[j], fit_power_law(e, k)});
  }
  return study;
}

}  // namespace saext
