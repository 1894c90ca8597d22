#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "saext/boundary.hpp"
#include "saext/fem.hpp"
#include "saext/types.hpp"

namespace saext {

/// Eigenpairs of a Hermitian pencil (A, B), B positive definite.
struct EigenSolution {
  RVector eigenvalues;   ///< ascending
  CMatrix eigenvectors;  ///< columns B-orthonormal, phase-fixed
  RVector residuals;     ///< ||A phi - lambda B phi||_2 per pair
  double norm_a = 0.0;   ///< ||A||_1
  double norm_b = 0.0;   ///< ||B||_1

  int count() const { return static_cast<int>(eigenvalues.size()); }
};

inline constexpr double kResidualTolerance = 1e-10;
inline constexpr double kClusterTolerance = 1e-9;

/// Lower Cholesky factor of a Hermitian positive definite matrix. Throws
/// EigenFailure carrying the 0-based pivot where positivity fails.
CMatrix cholesky_lower(const CMatrix& b);

/// Solves A phi = lambda B phi by Cholesky reduction to the standard Hermitian
/// problem L^{-1} A L^{-H}, a dense tridiagonal-QR eigensolver and back
/// substitution. `lowest` keeps only the k smallest pairs.
///
/// Eigenvalues closer than kClusterTolerance * max(1, |lambda|) are treated as
/// a cluster and re-orthonormalized in the B inner product. Each vector is
/// scaled so its largest-magnitude coefficient is real and positive.
EigenSolution solve_pencil(const CMatrix& a, const CMatrix& b, std::optional<int> lowest = std::nullopt);
EigenSolution solve_pencil(const Pencil& pencil, std::optional<int> lowest = std::nullopt);

struct NodeSample {
  int alpha = 0;
  double x = 0.0;
  Complex value;
};

/// Samples eigenfunction `which` at every node (and cell midpoints if asked).
/// Endpoint samples include the boundary-function contributions.
std::vector<NodeSample> eigenfunction_samples(const EigenSolution& sol, const Mesh& mesh,
                                              const BoundaryValues& bvals, int which, bool midpoints = false);

/// Reference function on M with its x-derivative.
struct ReferenceFunction {
  std::function<Complex(int alpha, double x)> value;
  std::function<Complex(int alpha, double x)> derivative;
};

/// H^1(M) distance between eigenfunction `which` and `reference`, after
/// multiplying the discrete eigenfunction by the unit phase that maximizes
/// Re <reference, c phi>. Integrates cell by cell with Gauss order
/// `quadrature_order` (at least 4).
double h1_error(const EigenSolution& sol, int which, const Mesh& mesh, const BoundaryValues& bvals,
                const ReferenceFunction& reference, int quadrature_order = 6);

/// Same, for an arbitrary coefficient vector.
double h1_error(const CVector& coeffs, const Mesh& mesh, const BoundaryValues& bvals,
                const ReferenceFunction& reference, int quadrature_order = 6);

}  // namespace saext
