#include "saext/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "quadrature.hpp"
#include "saext/errors.hpp"

namespace saext {

namespace {

double one_norm(const CMatrix& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

void require_hermitian(const CMatrix& m, const char* name) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << name << " is not square (" << m.rows() << "x" << m.cols() << ")";
    throw ValidationError(os.str());
  }
  const double scale = std::max(m.norm(), 1e-300);
  const double skew = (m - m.adjoint()).norm();
  if (skew > 1e-12 * scale) {
    std::ostringstream os;
    os << name << " is not Hermitian: ||M - M^H|| / ||M|| = " << skew / scale;
    throw ValidationError(os.str());
  }
}

// Unblocked column Cholesky, used to locate the failing pivot.
int failing_pivot(const CMatrix& b) {
  const Eigen::Index n = b.rows();
  CMatrix l = CMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = b(j, j).real();
    for (Eigen::Index k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (!(d > 0.0) || !std::isfinite(d)) return static_cast<int>(j);
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      Complex s = b(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / ljj;
    }
  }
  return -1;
}

}  // namespace

CMatrix cholesky_lower(const CMatrix& b) {
  Eigen::LLT<CMatrix, Eigen::Lower> llt(b);
  if (llt.info() != Eigen::Success || !llt.matrixL().toDenseMatrix().allFinite()) {
    const int pivot = failing_pivot(b);
    std::ostringstream os;
    os << "mass matrix is not positive definite (Cholesky pivot " << pivot << ")";
    throw EigenFailure(os.str(), pivot);
  }
  return llt.matrixL();
}

EigenSolution solve_pencil(const CMatrix& a, const CMatrix& b, std::optional<int> lowest) {
  require_hermitian(a, "A");
  require_hermitian(b, "B");
  if (a.rows() != b.rows()) throw ValidationError("pencil matrices differ in size");
  const Eigen::Index n = a.rows();
  const Eigen::Index keep = lowest ? std::clamp<Eigen::Index>(*lowest, 0, n) : n;

  const CMatrix l = cholesky_lower(b);
  const auto lower = l.triangularView<Eigen::Lower>();
  const CMatrix x = lower.solve(a);
  const CMatrix c = lower.solve(x.adjoint()).adjoint();

  Eigen::SelfAdjointEigenSolver<CMatrix> es(c, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) {
    throw EigenFailure("Hermitian eigensolver did not converge", -1);
  }

  EigenSolution sol;
  sol.norm_a = one_norm(a);
  sol.norm_b = one_norm(b);
  sol.eigenvalues = es.eigenvalues().head(keep);
  sol.eigenvectors = l.adjoint().triangularView<Eigen::Upper>().solve(es.eigenvectors().leftCols(keep));

  // B-orthonormalize inside clusters of (near-)degenerate eigenvalues.
  for (Eigen::Index start = 0; start < keep;) {
    Eigen::Index stop = start + 1;
    while (stop < keep && sol.eigenvalues(stop) - sol.eigenvalues(stop - 1) <=
                              kClusterTolerance * std::max(1.0, std::abs(sol.eigenvalues(stop)))) {
      ++stop;
    }
    if (stop - start > 1) {
      for (Eigen::Index j = start; j < stop; ++j) {
        auto vj = sol.eigenvectors.col(j);
        for (Eigen::Index k = start; k < j; ++k) {
          const auto vk = sol.eigenvectors.col(k);
          const Complex proj = (vk.adjoint() * (b * vj))(0, 0);
          vj -= proj * vk;
        }
        const double nrm = std::sqrt((vj.adjoint() * (b * vj))(0, 0).real());
        vj /= nrm;
      }
    }
    start = stop;
  }

  sol.residuals.resize(keep);
  for (Eigen::Index j = 0; j < keep; ++j) {
    auto v = sol.eigenvectors.col(j);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    const Complex pivot = v(arg);
    if (std::abs(pivot) > 0.0) v *= std::conj(pivot) / std::abs(pivot);
    v(arg) = Complex(v(arg).real(), 0.0);
    sol.residuals(j) = (a * v - sol.eigenvalues(j) * (b * v)).norm();
  }
  return sol;
}

EigenSolution solve_pencil(const Pencil& pencil, std::optional<int> lowest) {
  return solve_pencil(pencil.A, pencil.B, lowest);
}

std::vector<NodeSample> eigenfunction_samples(const EigenSolution& sol, const Mesh& mesh,
                                              const BoundaryValues& bvals, int which, bool midpoints) {
  if (which < 0 || which >= sol.count()) {
    std::ostringstream os;
    os << "eigenfunction index " << which << " out of range [0, " << sol.count() << ")";
    throw ValidationError(os.str());
  }
  const CVector coeffs = sol.eigenvectors.col(which);
  std::vector<NodeSample> out;
  for (int alpha = 0; alpha < mesh.interval_count(); ++alpha) {
    const auto u = nodal_values(mesh, bvals, coeffs, alpha);
    const auto x = mesh.nodes(alpha);
    for (std::size_t k = 0; k < u.size(); ++k) {
      out.push_back({alpha, x[k], u[k]});
      if (midpoints && k + 1 < u.size()) {
        out.push_back({alpha, 0.5 * (x[k] + x[k + 1]), 0.5 * (u[k] + u[k + 1])});
      }
    }
  }
  return out;
}

double h1_error(const CVector& coeffs, const Mesh& mesh, const BoundaryValues& bvals,
                const ReferenceFunction& reference, int quadrature_order) {
  const auto rule = detail::gauss_legendre(std::max(quadrature_order, 4));
  std::vector<std::vector<Complex>> nodal;
  nodal.reserve(static_cast<std::size_t>(mesh.interval_count()));
  for (int alpha = 0; alpha < mesh.interval_count(); ++alpha) {
    nodal.push_back(nodal_values(mesh, bvals, coeffs, alpha));
  }

  // Visit every quadrature point: f(alpha, x, weight, phi, phi', ref, ref').
  auto for_each_point = [&](auto&& f) {
    for (int alpha = 0; alpha < mesh.interval_count(); ++alpha) {
      const double h = mesh.step(alpha);
      const auto x = mesh.nodes(alpha);
      const auto& u = nodal[static_cast<std::size_t>(alpha)];
      for (std::size_t e = 0; e + 1 < u.size(); ++e) {
        const Complex slope = (u[e + 1] - u[e]) / h;
        const double mid = 0.5 * (x[e] + x[e + 1]);
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
          const double t = rule.nodes[q];
          const double xq = mid + 0.5 * h * t;
          const Complex phi = 0.5 * (1.0 - t) * u[e] + 0.5 * (1.0 + t) * u[e + 1];
          f(rule.weights[q] * 0.5 * h, phi, slope, reference.value(alpha, xq), reference.derivative(alpha, xq));
        }
      }
    }
  };

  Complex overlap = 0.0;
  for_each_point([&](double w, Complex phi, Complex, Complex ref, Complex) { overlap += w * std::conj(ref) * phi; });
  const Complex phase = std::abs(overlap) > 0.0 ? std::conj(overlap) / std::abs(overlap) : Complex(1.0, 0.0);

  double sum = 0.0;
  for_each_point([&](double w, Complex phi, Complex dphi, Complex ref, Complex dref) {
    sum += w * (std::norm(phase * phi - ref) + std::norm(phase * dphi - dref));
  });
  return std::sqrt(sum);
}

double h1_error(const EigenSolution& sol, int which, const Mesh& mesh, const BoundaryValues& bvals,
                const ReferenceFunction& reference, int quadrature_order) {
  if (which < 0 || which >= sol.count()) throw ValidationError("eigenfunction index out of range");
  return h1_error(CVector(sol.eigenvectors.col(which)), mesh, bvals, reference, quadrature_order);
}

}  // namespace saext
