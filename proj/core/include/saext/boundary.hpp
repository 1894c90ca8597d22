#pragma once

#include <random>
#include <vector>

#include "saext/geometry.hpp"
#include "saext/types.hpp"

namespace saext {

/// Ordering of the 2n boundary slots.
///  - Endpoint: (a_1, b_1, a_2, b_2, ..., a_n, b_n)
///  - Block:    (a_1, ..., a_n, b_1, ..., b_n), i.e. left values then right values
enum class Ordering { Endpoint, Block };

inline constexpr double kUnitarityTolerance = 1e-12;

/// block_of_endpoint[e] is the block-order position of endpoint-order slot e.
std::vector<int> endpoint_to_block_permutation(int n);

CMatrix to_block_order(const CMatrix& endpoint_matrix);
CMatrix to_endpoint_order(const CMatrix& block_matrix);
CVector to_block_order(const CVector& endpoint_vector);
CVector to_endpoint_order(const CVector& block_vector);

/// Frobenius norm of U^H U - I.
double unitarity_defect(const CMatrix& u);

/// Nearest unitary matrix in Frobenius norm (unitary polar factor).
CMatrix nearest_unitary(const CMatrix& m);

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases of
/// diag(R) absorbed into Q.
CMatrix random_unitary(int dim, std::mt19937_64& rng);

/// A self-adjoint extension, encoded by the unitary U in
///   psi - i psidot = U (psi + i psidot)
/// with psidot the outward normal derivative. Both orderings are kept.
class BoundaryCondition {
 public:
  /// Throws ValidationError for non-square, odd-sized or non-unitary input.
  static BoundaryCondition from_matrix(const CMatrix& u, Ordering ordering);

  int interval_count() const { return static_cast<int>(endpoint_.rows() / 2); }
  const CMatrix& endpoint_matrix() const { return endpoint_; }
  const CMatrix& block_matrix() const { return block_; }
  const CMatrix& matrix(Ordering ordering) const { return ordering == Ordering::Endpoint ? endpoint_ : block_; }
  double unitarity_defect() const { return defect_; }

 private:
  BoundaryCondition(CMatrix endpoint, CMatrix block, double defect)
      : endpoint_(std::move(endpoint)), block_(std::move(block)), defect_(defect) {}

  CMatrix endpoint_;
  CMatrix block_;
  double defect_;
};

BoundaryCondition preset_dirichlet(int n);
BoundaryCondition preset_neumann(int n);
/// Single interval: u(a) = e^{i theta} u(b), u'(a) = e^{i theta} u'(b).
BoundaryCondition preset_quasi_periodic(double theta);

/// Boundary values and outward normal derivatives of a function.
struct BoundaryTrace {
  CVector values;
  CVector normal_derivatives;
  Ordering ordering = Ordering::Endpoint;
};

/// || (psi - i psidot) - U (psi + i psidot) ||_2
double admissibility_residual(const BoundaryCondition& bc, const BoundaryTrace& trace);

/// The boundary matrix system F V = C of a subdivision, in endpoint ordering:
///   F = diag(1 - i/h) - U diag(1 + i/h),   C = -i (I + U) diag(1/h).
struct BoundarySystem {
  CMatrix F;
  CMatrix C;
  RVector h;
  CMatrix U;
};

BoundarySystem assemble_boundary_system(const BoundaryCondition& bc, const Mesh& mesh);

struct ConditionReport {
  double kappa_estimate = 0.0;  ///< 2-norm condition number of F (SVD)
  double bound = 0.0;           ///< (h_max/h_min) * 2 / spectrum_gap
  double spectrum_gap = 0.0;    ///< min |1 - mu| over spec(U_0), U_0 = U D conj(D)^{-1}
  bool compatible = true;       ///< false when 1 is (numerically) in spec(U_0)
};

inline constexpr double kSpectrumGapFloor = 1e-12;

ConditionReport condition_report(const BoundarySystem& sys);

/// Endpoint values of the boundary functions. Column i of V holds the values
/// of beta^(i) at the 2n endpoints (endpoint ordering).
struct BoundaryValues {
  CMatrix V;
  /// G = diag(1/h) V, Hermitian by construction.
  CMatrix G;
  RVector h;
  /// ||F V - C|| / max(||C||, 1) of the raw solve, before projection.
  double solve_residual = 0.0;

  int slot_count() const { return static_cast<int>(V.rows()); }
  /// Outward normal derivatives of beta^(i): -(1/h_l) (delta_il - V_li).
  CVector normal_derivatives(int i) const;
  BoundaryTrace trace(int i) const;
};

inline constexpr double kDefaultKappaMax = 1e8;
inline constexpr int kDefaultMaxRetries = 8;

/// Solves F V = C by partial-pivoting LU and projects onto the weighted
/// Hermitian set (1/h_j) conj(V_ji) = (1/h_i) V_ij. Throws ConditionFailure
/// when the system is incompatible or kappa(F) exceeds kappa_max.
BoundaryValues solve_boundary_values(const BoundarySystem& sys, double kappa_max = kDefaultKappaMax);

struct Discretization {
  Mesh mesh;
  BoundarySystem system;
  BoundaryValues values;
  ConditionReport report;
};

/// Tries N, N+1, ..., N+max_retries and returns the first resolution whose
/// boundary matrix has kappa <= kappa_max. Exhaustion throws ConditionFailure
/// carrying every probe.
Discretization retry_mesh_on_bad_conditioning(const BoundaryCondition& bc, const IntervalSet& geometry,
                                              int resolution, double kappa_max = kDefaultKappaMax,
                                              int max_retries = kDefaultMaxRetries);

}  // namespace saext
