#pragma once

#include <string>
#include <vector>

#include "saext/boundary.hpp"
#include "saext/geometry.hpp"
#include "saext/potential.hpp"
#include "saext/types.hpp"

namespace saext {

// ---------------------------------------------------------------------------
// Hadamard algebra

/// (X o Y)_k = X_k Y_k.
CVector hadamard(const CVector& x, const CVector& y);

/// T o X: the matrix with (T o X) Y = T (X o Y), i.e. column j is T^j X_j.
CMatrix hadamard(const CMatrix& t, const CVector& x);

/// T (.) [psi^1 | psi^2] for a 2n x 2n matrix T with n x n blocks T^{ab} and a
/// 2n x 2 trace matrix whose top n rows are left-endpoint data and bottom n
/// rows right-endpoint data. Returns the 2n x 2n matrix
///   [ T11 o psi_l^1 + T12 o psi_r^1 | T11 o psi_l^2 + T12 o psi_r^2 ]
///   [ T21 o psi_l^1 + T22 o psi_r^1 | T21 o psi_l^2 + T22 o psi_r^2 ].
CMatrix odot(const CMatrix& t, const CMatrix& psi);

// ---------------------------------------------------------------------------
// Fundamental solutions of -mu Psi'' + V Psi = lambda Psi on each interval

enum class FundamentalBasis {
  /// Psi^1(a) = 1, Psi^1'(a) = 0; Psi^2(a) = 0, Psi^2'(a) = 1. Entire in lambda.
  CosSin,
  /// Psi^{1,2} = exp(+-i k (x - a)), k = sqrt((lambda - c)/mu) on the
  /// principal branch. Piecewise-constant potentials only; degenerate at k = 0.
  Exponential,
  /// CosSin, except on intervals where (V - lambda)/mu > 1/L^2 throughout.
  /// There one solution starts from (1, 0) at each endpoint and both are
  /// rescaled to unit size; cos/sin would lose the decaying solution.
  Adaptive,
};

/// Boundary traces of a fundamental system in block order: row alpha is the
/// left endpoint of interval alpha, row n + alpha its right endpoint; column
/// sigma is the solution Psi^sigma. Normal derivatives point outwards.
struct FundamentalTraces {
  CMatrix values;
  CMatrix normal_derivatives;

  int interval_count() const { return static_cast<int>(values.rows() / 2); }
  /// psi + i psidot
  CMatrix plus() const { return values + kI * normal_derivatives; }
  /// psi - i psidot
  CMatrix minus() const { return values - kI * normal_derivatives; }
  /// Psi^1 Psi^2' - Psi^2 Psi^1' at a_alpha.
  Complex wronskian(int alpha) const;
};

struct OdeOptions {
  int initial_steps = 2048;
  double relative_tolerance = 1e-9;
  int max_halvings = 10;
};

/// Closed form for piecewise-constant potentials, RK4 with step-halving
/// comparison otherwise. Throws Error when the ODE tolerance cannot be met.
FundamentalTraces fundamental_traces(const Potential& potential, const IntervalSet& geometry, double lambda,
                                     double mu = 1.0, FundamentalBasis basis = FundamentalBasis::CosSin,
                                     const OdeOptions& ode = {});

/// Always integrates the ODE (CosSin normalization), whatever the potential.
FundamentalTraces integrate_fundamental_traces(const Potential& potential, const IntervalSet& geometry,
                                               double lambda, double mu = 1.0, const OdeOptions& ode = {});

// ---------------------------------------------------------------------------
// Spectral function

/// M(U, lambda) = I (.) [psi_-^1 | psi_-^2] - U (.) [psi_+^1 | psi_+^2], U in block order.
CMatrix spectral_matrix(const BoundaryCondition& bc, const FundamentalTraces& traces);

/// Lambda_U(lambda) = det M(U, lambda).
Complex spectral_det(const BoundaryCondition& bc, const FundamentalTraces& traces);

enum class Side { Left, Right };
enum class Sign { Plus, Minus };

/// Single interval: det [[psi_{s1 p1}^1, psi_{s1 p1}^2], [psi_{s2 p2}^1, psi_{s2 p2}^2]].
Complex trace_wronskian(const FundamentalTraces& traces, Side s1, Side s2, Sign p1, Sign p2);

/// Single interval expansion of det M in the six trace Wronskians.
Complex spectral_det_closed_form(const BoundaryCondition& bc, const FundamentalTraces& traces);

/// U = e^{i theta/2} [[alpha, beta], [-conj(beta), conj(alpha)]], |alpha|^2 + |beta|^2 = 1.
struct U2Parameters {
  double theta = 0.0;
  Complex alpha = 1.0;
  Complex beta = 0.0;
};

CMatrix unitary_from_parameters(const U2Parameters& p);
/// Inverse map with theta = arg det U in (-pi, pi].
U2Parameters parameters_from_unitary(const CMatrix& u);

/// The closed form rewritten in (theta, alpha, beta).
Complex spectral_det_parametrized(const U2Parameters& p, const FundamentalTraces& traces);

/// The six Wronskians of the free particle on [0, 2 pi] with mu = 1/2 and the
/// exponential basis exp(+-i sqrt(2 lambda) x), lambda > 0.
struct FreeParticleWronskians {
  Complex lr_mm;  ///< W(l,r,-,-)
  Complex ll_pm;  ///< W(l,l,+,-)
  Complex rr_mp;  ///< W(r,r,-,+)
  Complex rl_mp;  ///< W(r,l,-,+)
  Complex rl_pm;  ///< W(r,l,+,-)
  Complex lr_pp;  ///< W(l,r,+,+)
};
FreeParticleWronskians free_particle_wronskians(double lambda);
Complex free_particle_spectral_function(double lambda, const U2Parameters& p);

// ---------------------------------------------------------------------------
// Root finding

/// Rigorous lower bound on the spectrum from the Robin form of the boundary
/// condition and a one-dimensional trace inequality.
double spectral_lower_bound(const BoundaryCondition& bc, const Potential& potential, const IntervalSet& geometry,
                            double mu = 1.0);

struct SpectrumOptions {
  double lambda_min = 0.0;
  double lambda_max = 1.0;
  double mu = 1.0;
  /// Grid points per unit of s = sign(lambda) sqrt(|lambda|).
  double grid_density = 2000.0;
  double atol = 1e-12;
  double rtol = 1e-6;
  /// Singular value of the scaled M below which a direction counts as null.
  double singular_threshold = 1e-5;
  FundamentalBasis basis = FundamentalBasis::Adaptive;
  OdeOptions ode{};
};

struct SpectralRoot {
  double lambda = 0.0;
  int multiplicity = 1;
  double normalized_det = 0.0;  ///< |det| of the scaled M
  double sigma_min = 0.0;       ///< smallest singular value of the scaled M
};

struct SpectrumResult {
  std::vector<SpectralRoot> roots;
  std::vector<std::string> warnings;
  double median_normalized_det = 0.0;

  /// Roots repeated according to multiplicity, ascending.
  std::vector<double> eigenvalues() const;
};

/// The scaled M divides the column of Psi^sigma_alpha by the norm of its
/// boundary data (psi, psidot at both ends), which removes the growth of the
/// fundamental solutions without moving the zeros.
struct ScanPoint {
  double lambda = 0.0;
  Complex det;  ///< Lambda_U(lambda)
  double normalized_det = 0.0;
};

/// The scan grid, uniform in s = sign(lambda) sqrt(|lambda|).
std::vector<double> scan_grid(const SpectrumOptions& options);

std::vector<ScanPoint> scan_spectral_function(const BoundaryCondition& bc, const Potential& potential,
                                              const IntervalSet& geometry, const SpectrumOptions& options);

/// Zeros of Lambda_U in [lambda_min, lambda_max]: local minima of the scaled
/// |det M| on the scan grid, refined by golden-section search on the smallest
/// singular value to width 1e-10 max(1, |lambda|), accepted when the scaled
/// |det M| is below atol + rtol * median and M is numerically singular.
/// Candidates below spectral_lower_bound are dropped with a warning.
SpectrumResult find_spectrum(const BoundaryCondition& bc, const Potential& potential, const IntervalSet& geometry,
                             const SpectrumOptions& options);

/// The lowest `count` eigenvalues (with multiplicity) above `floor`, expanding
/// the search window upward from max(spectral_lower_bound, floor).
std::vector<double> lowest_spectrum(const BoundaryCondition& bc, const Potential& potential,
                                    const IntervalSet& geometry, int count, SpectrumOptions options,
                                    double floor = -1e4);

}  // namespace saext
