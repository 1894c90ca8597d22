// Acceptance suite. Prints one PASS/FAIL line per criterion; with a numeric
// argument runs only that criterion. Exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "saext/saext.hpp"
#include "support/charpoly.hpp"

using namespace saext;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Product of row norms: bounds |det M| and sets the roundoff scale of any
// expansion of it.
double hadamard_scale(const CMatrix& m) {
  double s = 1.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) s *= m.row(i).norm();
  return std::max(1.0, s);
}

IntervalSet circle() { return IntervalSet({{0.0, kTwoPi}}); }

Outcome dirichlet_boundary_values() {
  const Mesh mesh = build_mesh(circle(), 250);
  const BoundaryValues bv = solve_boundary_values(assemble_boundary_system(preset_dirichlet(1), mesh));
  const bool zero = (bv.V.array() == Complex(0.0)).all();
  return {zero, fmt("max|V| = %.3g", bv.V.cwiseAbs().maxCoeff())};
}

Outcome neumann_boundary_values() {
  const Mesh mesh = build_mesh(circle(), 250);
  const BoundaryValues bv = solve_boundary_values(assemble_boundary_system(preset_neumann(1), mesh));
  const double err = (bv.V - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff();
  return {err <= 1e-12, fmt("max|V - I| = %.3g", err)};
}

ConvergenceStudy& convergence_sweep(double* seconds = nullptr) {
  static double elapsed = 0.0;
  static ConvergenceStudy study = [] {
    const auto t0 = std::chrono::steady_clock::now();
    ConvergenceStudy s = dirichlet_convergence({50, 100, 200, 400, 800});
    elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return s;
  }();
  if (seconds) *seconds = elapsed;
  return study;
}

Outcome convergence_slope() {
  double seconds = 0.0;
  const ConvergenceStudy& s = convergence_sweep(&seconds);
  const LinearFit& fit = *s.h1_fit;
  const bool ok = std::abs(fit.slope + 1.0) <= 0.05 && seconds < 120.0;
  return {ok, fmt("H1 slope %.4f +- %.4f, %.1f s", fit.slope, fit.slope_stderr, seconds)};
}

Outcome eigenvalue_accuracy() {
  SolveOptions opts;
  opts.resolution = 1000;
  opts.levels = 5;
  const SolveResult r = solve_problem(circle(), preset_dirichlet(1), Potential::zero(), opts);
  double worst = 0.0;
  for (int k = 1; k <= 5; ++k) {
    const double exact = k * k / 4.0;
    worst = std::max(worst, std::abs(r.solution.eigenvalues(k - 1) - exact) / exact);
  }
  const double first = std::abs(r.solution.eigenvalues(0) - 0.25);
  const LinearFit& fit = *convergence_sweep().eigenvalue_fit;
  const bool ok = first <= 1e-3 && worst <= 1e-3 && std::abs(fit.slope + 2.0) <= 0.15;
  return {ok, fmt("|l1-0.25| = %.3g, worst rel = %.3g, eigenvalue slope %.4f", first, worst, fit.slope)};
}

Outcome periodic_spectrum() {
  CMatrix u(2, 2);
  u << 0.0, 1.0, 1.0, 0.0;
  SolveOptions opts;
  opts.resolution = 500;
  opts.levels = 5;
  const SolveResult r = solve_problem(circle(), BoundaryCondition::from_matrix(u, Ordering::Endpoint),
                                      Potential::zero(), opts);
  const RVector& l = r.solution.eigenvalues;
  const double gap1 = std::abs(l(2) - l(1)) / std::abs(l(2));
  const double gap2 = std::abs(l(4) - l(3)) / std::abs(l(4));
  const bool ok = l(0) >= -1e-6 && l(0) <= 1e-4 && gap1 <= 1e-3 && gap2 <= 1e-3;
  return {ok, fmt("l1 = %.3g, pair gaps %.3g %.3g", l(0), gap1, gap2)};
}

Outcome oracle_cross_validation() {
  std::mt19937_64 rng(20260415);
  double worst = 0.0, worst_lambda = 0.0;
  int compared = 0, over = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const BoundaryCondition bc = BoundaryCondition::from_matrix(random_unitary(2, rng), Ordering::Endpoint);
    SolveOptions opts;
    opts.resolution = 800;
    const SolveResult r = solve_problem(circle(), bc, Potential::zero(), opts);
    std::vector<double> fem;
    for (Eigen::Index i = 0; i < r.solution.eigenvalues.size() && fem.size() < 5; ++i)
      if (std::abs(r.solution.eigenvalues(i)) <= 1e4) fem.push_back(r.solution.eigenvalues(i));
    SpectrumOptions so;
    const std::vector<double> oracle = lowest_spectrum(bc, Potential::zero(), circle(), 5, so, -1e4);
    for (std::size_t k = 0; k < 5; ++k) {
      const double rel = std::abs(fem[k] - oracle[k]) / std::max(1.0, std::abs(oracle[k]));
      if (rel > 1e-3) ++over;
      if (rel > worst) {
        worst = rel;
        worst_lambda = oracle[k];
      }
      ++compared;
    }
  }
  return {worst <= 1e-3, fmt("%d levels, %d above 1e-3, worst relative difference %.3g at lambda = %.6g", compared,
                             over, worst, worst_lambda)};
}

Outcome oracle_consistency() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lam(-5.0, 50.0);
  std::uniform_real_distribution<double> mu_dist(0.25, 2.0);
  double worst_closed = 0.0, worst_param = 0.0;
  for (int i = 0; i < 100; ++i) {
    const CMatrix u = random_unitary(2, rng);
    const BoundaryCondition bc = BoundaryCondition::from_matrix(u, Ordering::Endpoint);
    const FundamentalTraces t =
        fundamental_traces(Potential::zero(), IntervalSet({{0.0, kTwoPi}}), lam(rng), mu_dist(rng));
    const Complex generic = spectral_det(bc, t);
    const double scale = hadamard_scale(spectral_matrix(bc, t));
    worst_closed = std::max(worst_closed, std::abs(generic - spectral_det_closed_form(bc, t)) / scale);
    worst_param =
        std::max(worst_param, std::abs(generic - spectral_det_parametrized(parameters_from_unitary(u), t)) / scale);
  }
  // Worked free-particle example: mu = 1/2, exponential basis, lambda > 0.
  std::uniform_real_distribution<double> pos(0.05, 20.0);
  double worst_worked = 0.0, worst_terms = 0.0;
  for (int i = 0; i < 100; ++i) {
    const U2Parameters p = parameters_from_unitary(random_unitary(2, rng));
    const double l = pos(rng);
    const FundamentalTraces t =
        fundamental_traces(Potential::zero(), circle(), l, 0.5, FundamentalBasis::Exponential);
    const Complex generic =
        spectral_det(BoundaryCondition::from_matrix(unitary_from_parameters(p), Ordering::Endpoint), t);
    const double scale = std::max(1.0, std::abs(generic));
    worst_worked = std::max(worst_worked, std::abs(generic - free_particle_spectral_function(l, p)) / scale);
    const FreeParticleWronskians w = free_particle_wronskians(l);
    using enum Side;
    using enum Sign;
    const Complex pairs[6][2] = {
        {w.lr_mm, trace_wronskian(t, Left, Right, Minus, Minus)}, {w.ll_pm, trace_wronskian(t, Left, Left, Plus, Minus)},
        {w.rr_mp, trace_wronskian(t, Right, Right, Minus, Plus)}, {w.rl_mp, trace_wronskian(t, Right, Left, Minus, Plus)},
        {w.rl_pm, trace_wronskian(t, Right, Left, Plus, Minus)},  {w.lr_pp, trace_wronskian(t, Left, Right, Plus, Plus)}};
    for (const auto& pr : pairs)
      worst_terms = std::max(worst_terms, std::abs(pr[0] - pr[1]) / std::max(1.0, std::abs(pr[0])));
  }
  const bool ok = worst_closed <= 1e-12 && worst_param <= 1e-12 && worst_worked <= 1e-12 && worst_terms <= 1e-12;
  return {ok, fmt("closed %.2g, parametrized %.2g, worked %.2g, terms %.2g", worst_closed, worst_param,
                  worst_worked, worst_terms)};
}

Outcome conditioning_bound() {
  std::mt19937_64 rng(11);
  const Mesh one = build_mesh(circle(), 250);
  const Mesh two = build_mesh(IntervalSet({{0.0, 1.0}, {0.0, 3.0}}), 40);
  double worst = 0.0;
  int violations = 0;
  for (int dim : {2, 4}) {
    const Mesh& mesh = dim == 2 ? one : two;
    for (int i = 0; i < 100; ++i) {
      const BoundaryCondition bc = BoundaryCondition::from_matrix(random_unitary(dim, rng), Ordering::Endpoint);
      const ConditionReport rep = condition_report(assemble_boundary_system(bc, mesh));
      const double ratio = rep.kappa_estimate / rep.bound;
      worst = std::max(worst, ratio);
      if (ratio > 1.0 + 1e-12) ++violations;
    }
  }
  return {violations == 0, fmt("200 samples, max kappa/bound = %.4f", worst)};
}

Outcome hermiticity_suite() {
  std::mt19937_64 rng(5);
  int failures = 0;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int dim = i % 2 == 0 ? 2 : 4;
    const IntervalSet geom = dim == 2 ? circle() : IntervalSet({{0.0, 1.0}, {0.0, 3.0}});
    const BoundaryCondition bc = BoundaryCondition::from_matrix(random_unitary(dim, rng), Ordering::Endpoint);
    const Discretization d = retry_mesh_on_bad_conditioning(bc, geom, dim == 2 ? 100 : 60);
    const Pencil p = assemble_pencil(d.mesh, d.values, Potential::zero());
    if (!(p.A == p.A.adjoint()) || !(p.B == p.B.adjoint())) ++failures;
    try {
      cholesky_lower(p.B);
      const EigenSolution s = solve_pencil(p);
      for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k)
        worst = std::max(worst, s.residuals(k) / (s.norm_a + std::abs(s.eigenvalues(k)) * s.norm_b));
    } catch (const EigenFailure&) {
      ++failures;
    }
  }
  return {failures == 0 && worst <= 1e-10, fmt("%d failures, worst scaled residual %.3g", failures, worst)};
}

Outcome stability_exponents() {
  std::vector<double> eps;
  for (int i = 1; i <= 100; ++i) eps.push_back(1e-5 * i);
  CMatrix u(2, 2);
  u << 0.0, 1.0, 1.0, 0.0;
  StabilityOptions opts;
  opts.resolution = 250;
  const char* env = std::getenv("SAEXT_THREADS");
  opts.threads = env ? std::max(1, std::atoi(env)) : 1;
  const StabilityStudy s = stability_study(circle(), BoundaryCondition::from_matrix(u, Ordering::Endpoint),
                                           Potential::zero(), eps, opts);
  const double paper[4] = {-0.89, -0.42, -0.03, 0.28};
  bool within = true, monotone = true;
  std::ostringstream out;
  out << "exponents";
  double prev = -1e300;
  for (int j = 0; j < 4; ++j) {
    const auto& fit = s.fits[static_cast<std::size_t>(j)].fit;
    if (!fit) return {false, "fit failed"};
    out << fmt(" %.3f", fit->b);
    within = within && std::abs(fit->b - paper[j]) <= 0.15;
    monotone = monotone && fit->b > prev;
    prev = fit->b;
  }
  out << (monotone ? ", increasing" : ", not increasing");
  return {within && monotone, out.str()};
}

Outcome small_pencils() {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g;
  double worst = 0.0;
  int missing = 0;
  for (int i = 0; i < 200; ++i) {
    CMatrix x(6, 6), c(6, 6);
    for (int r = 0; r < 6; ++r)
      for (int s = 0; s < 6; ++s) {
        x(r, s) = Complex(g(rng), g(rng));
        c(r, s) = Complex(g(rng), g(rng));
      }
    const CMatrix a = 0.5 * (x + x.adjoint());
    const CMatrix b = c.adjoint() * c + CMatrix::Identity(6, 6);
    const EigenSolution s = solve_pencil(a, b);
    const std::vector<double> ref = saext::testing::charpoly_eigenvalues(a, b);
    if (ref.size() != 6) {
      ++missing;
      continue;
    }
    for (int k = 0; k < 6; ++k) worst = std::max(worst, std::abs(s.eigenvalues(k) - ref[static_cast<std::size_t>(k)]));
  }
  return {missing == 0 && worst <= 1e-8, fmt("%d unresolved, worst |diff| = %.3g", missing, worst)};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {"Dirichlet boundary solve gives V = 0", dirichlet_boundary_values},
      {"Neumann boundary solve gives V = I", neumann_boundary_values},
      {"Dirichlet ground state H1 convergence slope", convergence_slope},
      {"Dirichlet eigenvalue accuracy at N = 1000", eigenvalue_accuracy},
      {"periodic spectrum", periodic_spectrum},
      {"spectral determinant vs FEM, random U(2)", oracle_cross_validation},
      {"spectral determinant internal consistency", oracle_consistency},
      {"boundary matrix conditioning bound", conditioning_bound},
      {"pencil hermiticity and residuals", hermiticity_suite},
      {"quasi-periodic stability exponents", stability_exponents},
      {"small pencils vs characteristic polynomial", small_pencils},
  };
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (only != 0 && only != id) continue;
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %2d %s (%s)\n", o.pass ? "PASS" : "FAIL", id, criteria[i].name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures;
}
