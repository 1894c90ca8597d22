#pragma once

#include <vector>

#include "saext/boundary.hpp"
#include "saext/geometry.hpp"
#include "saext/potential.hpp"
#include "saext/types.hpp"

namespace saext {

/// Identity of a global basis function f_a.
///
/// Global ordering: for each interval alpha in turn, the functions attached
/// to interior nodes x_1..x_r, i.e.
///   beta^(2 alpha), f^(alpha)_2, ..., f^(alpha)_{r-1}, beta^(2 alpha + 1).
/// Boundary functions use 0-based endpoint slots (2 alpha left, 2 alpha + 1 right).
struct BasisTag {
  enum class Kind { Bulk, Boundary };
  Kind kind = Kind::Bulk;
  int alpha = 0;  ///< interval of the attached node
  int node = 0;   ///< attached node index k (1..r_alpha)
  int slot = -1;  ///< boundary slot for Kind::Boundary, -1 otherwise
};

BasisTag basis_tag(const Mesh& mesh, int global_index);
int bulk_index(const Mesh& mesh, int alpha, int k);
int boundary_index(const Mesh& mesh, int slot);

/// Hat function f^(alpha)_k, 2 <= k <= r_alpha - 1, at x in [a_alpha, b_alpha].
double eval_bulk(const Mesh& mesh, int alpha, int k, double x);

/// Boundary function beta^(slot) restricted to interval alpha.
Complex eval_boundary(const Mesh& mesh, const BoundaryValues& bvals, int slot, int alpha, double x);

/// Nodal values x_0..x_{r+1} on interval alpha of sum_a coeffs(a) f_a.
std::vector<Complex> nodal_values(const Mesh& mesh, const BoundaryValues& bvals, const CVector& coeffs,
                                  int alpha);

/// Value and x-derivative of sum_a coeffs(a) f_a at x in interval alpha.
/// At a node the derivative is taken from the cell to the right (left at b).
struct FieldPoint {
  Complex value;
  Complex derivative;
};
FieldPoint evaluate_field(const Mesh& mesh, const BoundaryValues& bvals, const CVector& coeffs, int alpha,
                          double x);

/// [conj(beta_i) beta_j']_{dM} = sum_k conj(V_ki) (V_kj - delta_kj) / h_k, from
/// one-sided endpoint derivatives. Hermitian whenever the weighted constraint on
/// V holds.
CMatrix boundary_bracket(const BoundaryValues& bvals);

/// Generalized eigenproblem A Phi = lambda B Phi of the Ritz-Galerkin space.
struct Pencil {
  CMatrix A;
  CMatrix B;
  /// Structural couplings: pattern[a] lists the b (ascending) for which
  /// f_a, f_b share support. Entries outside the pattern are exactly zero.
  std::vector<std::vector<int>> pattern;

  int dim() const { return static_cast<int>(A.rows()); }
};

struct PencilOptions {
  double mu = 1.0;            ///< H = -mu d^2/dx^2 + V
  int quadrature_order = 3;   ///< Gauss points per cell for the potential term
};

/// A_ab = mu (<f_a', f_b'> - [conj(f_a) f_b']_{dM}) + <f_a, V f_b>,
/// B_ab = <f_a, f_b>. Both are Hermitian by construction: every entry above
/// the diagonal is accumulated together with its conjugate mirror.
Pencil assemble_pencil(const Mesh& mesh, const BoundaryValues& bvals, const Potential& potential,
                       const PencilOptions& options = {});

}  // namespace saext
