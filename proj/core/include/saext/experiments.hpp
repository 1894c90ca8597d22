#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "saext/boundary.hpp"
#include "saext/eigensolver.hpp"
#include "saext/fem.hpp"
#include "saext/geometry.hpp"
#include "saext/potential.hpp"

namespace saext {

// ---------------------------------------------------------------------------
// End-to-end solve

struct SolveOptions {
  int resolution = 250;
  double mu = 1.0;
  int quadrature_order = 3;
  double kappa_max = kDefaultKappaMax;
  int max_retries = kDefaultMaxRetries;
  /// Number of lowest eigenpairs to keep; all when empty.
  std::optional<int> levels;
};

struct SolveResult {
  Discretization discretization;
  Pencil pencil;
  EigenSolution solution;
};

SolveResult solve_problem(const IntervalSet& geometry, const BoundaryCondition& bc, const Potential& potential,
                          const SolveOptions& options);

// ---------------------------------------------------------------------------
// Fitting

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double intercept_stderr = 0.0;
  int points = 0;
};

/// Ordinary least squares y = slope x + intercept; needs at least two points.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);
/// fit_line on (log x, log y).
LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

/// K = a eps^b + c by profile least squares over b in [b_min, b_max].
struct PowerLawFit {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double b_stderr = 0.0;
  double rms = 0.0;
  int points = 0;
};

std::optional<PowerLawFit> fit_power_law(const std::vector<double>& eps, const std::vector<double>& k,
                                         double b_min = -3.0, double b_max = 3.0);

// ---------------------------------------------------------------------------
// Convergence of the Dirichlet ground state on [0, 2 pi]

struct ConvergenceRow {
  int resolution = 0;
  int dimension = 0;
  double h1_error = 0.0;
  double eigenvalue = 0.0;
  double eigenvalue_error = 0.0;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  std::optional<LinearFit> h1_fit;          ///< log h1_error against log N
  std::optional<LinearFit> eigenvalue_fit;  ///< log |lambda_N - lambda| against log N
};

ConvergenceStudy dirichlet_convergence(const std::vector<int>& resolutions, double mu = 1.0, int threads = 1);

// ---------------------------------------------------------------------------
// Stability of the spectrum under perturbations of U

enum class PerturbationMode {
  /// U + i eps A, projected back onto U(2n) by the polar factor.
  Linear,
  /// U exp(i eps H), H the Hermitian part of U^H A.
  Geodesic,
};

enum class LevelMatching { SortedIndex, Nearest };

struct PerturbedMatrix {
  CMatrix u;
  double defect_before = 0.0;   ///< unitarity defect before projection
  double polar_distance = 0.0;  ///< Frobenius distance moved by the projection
};

/// Default direction A: the 2 x 2 block [[0, 1], [-1, 0]] repeated on the diagonal.
CMatrix default_perturbation_direction(int dim);

PerturbedMatrix perturb_boundary_matrix(const CMatrix& u, const CMatrix& direction, double eps,
                                        PerturbationMode mode);

struct StabilityOptions {
  int resolution = 250;
  double mu = 1.0;
  int quadrature_order = 3;
  /// 0-based indices into the ascending spectrum; 0 is the ground level.
  /// The default picks one member of each of the four lowest excited pairs
  /// of the periodic spectrum.
  std::vector<int> levels{1, 3, 5, 7};
  PerturbationMode mode = PerturbationMode::Linear;
  LevelMatching matching = LevelMatching::SortedIndex;
  /// Direction A in endpoint ordering; default_perturbation_direction when empty.
  std::optional<CMatrix> direction;
  int threads = 1;
};

struct StabilityRow {
  double epsilon = 0.0;
  int level = 0;
  double lambda0 = 0.0;
  double lambda = 0.0;
  double k = 0.0;
  /// "ok", "ill-conditioned ratio" or "undefined epsilon"
  std::string status = "ok";
  double defect_before = 0.0;
  double polar_distance = 0.0;
};

struct LevelFit {
  int level = 0;
  std::optional<PowerLawFit> fit;
};

struct StabilityStudy {
  std::vector<double> base_spectrum;
  std::vector<StabilityRow> rows;
  std::vector<LevelFit> fits;
};

/// K(eps) = |lambda(eps) - lambda(0)| / (eps |lambda(0)|) per tracked level.
StabilityStudy stability_study(const IntervalSet& geometry, const BoundaryCondition& base, const Potential& potential,
                               const std::vector<double>& epsilons, const StabilityOptions& options);

/// Runs fn(0..count-1) on up to `threads` workers. Each index is processed
/// exactly once; results are whatever fn stores by index.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace saext
