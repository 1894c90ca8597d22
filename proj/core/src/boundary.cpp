#include "saext/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "saext/errors.hpp"

namespace saext {

std::vector<int> endpoint_to_block_permutation(int n) {
  std::vector<int> perm(static_cast<std::size_t>(2 * n));
  for (int alpha = 0; alpha < n; ++alpha) {
    perm[static_cast<std::size_t>(2 * alpha)] = alpha;
    perm[static_cast<std::size_t>(2 * alpha + 1)] = n + alpha;
  }
  return perm;
}

namespace {

void require_even_square(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0 || m.rows() % 2 != 0) {
    std::ostringstream os;
    os << "boundary matrix must be square of even size, got " << m.rows() << "x" << m.cols();
    throw ValidationError(os.str());
  }
}

}  // namespace

CMatrix to_block_order(const CMatrix& endpoint_matrix) {
  require_even_square(endpoint_matrix);
  const auto perm = endpoint_to_block_permutation(static_cast<int>(endpoint_matrix.rows() / 2));
  CMatrix out(endpoint_matrix.rows(), endpoint_matrix.cols());
  for (Eigen::Index i = 0; i < endpoint_matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < endpoint_matrix.cols(); ++j) {
      out(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]) = endpoint_matrix(i, j);
    }
  }
  return out;
}

CMatrix to_endpoint_order(const CMatrix& block_matrix) {
  require_even_square(block_matrix);
  const auto perm = endpoint_to_block_permutation(static_cast<int>(block_matrix.rows() / 2));
  CMatrix out(block_matrix.rows(), block_matrix.cols());
  for (Eigen::Index i = 0; i < block_matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < block_matrix.cols(); ++j) {
      out(i, j) = block_matrix(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

CVector to_block_order(const CVector& endpoint_vector) {
  const auto perm = endpoint_to_block_permutation(static_cast<int>(endpoint_vector.size() / 2));
  CVector out(endpoint_vector.size());
  for (Eigen::Index i = 0; i < endpoint_vector.size(); ++i) {
    out(perm[static_cast<std::size_t>(i)]) = endpoint_vector(i);
  }
  return out;
}

CVector to_endpoint_order(const CVector& block_vector) {
  const auto perm = endpoint_to_block_permutation(static_cast<int>(block_vector.size() / 2));
  CVector out(block_vector.size());
  for (Eigen::Index i = 0; i < block_vector.size(); ++i) {
    out(i) = block_vector(perm[static_cast<std::size_t>(i)]);
  }
  return out;
}

double unitarity_defect(const CMatrix& u) {
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).norm();
}

CMatrix nearest_unitary(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

CMatrix random_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix z(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      z(i, j) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix& r = qr.matrixQR();
  for (int j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    const Complex phase = mag > 0.0 ? r(j, j) / mag : Complex(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

BoundaryCondition BoundaryCondition::from_matrix(const CMatrix& u, Ordering ordering) {
  require_even_square(u);
  const double defect = saext::unitarity_defect(u);
  if (!(defect <= kUnitarityTolerance)) {
    std::ostringstream os;
    os.precision(3);
    os << "boundary matrix is not unitary: ||U^H U - I|| = " << std::scientific << defect << " exceeds "
       << kUnitarityTolerance;
    throw ValidationError(os.str());
  }
  if (ordering == Ordering::Endpoint) {
    return BoundaryCondition(u, to_block_order(u), defect);
  }
  return BoundaryCondition(to_endpoint_order(u), u, defect);
}

BoundaryCondition preset_dirichlet(int n) {
  if (n < 1) throw ValidationError("preset_dirichlet: n must be >= 1");
  return BoundaryCondition::from_matrix(-CMatrix::Identity(2 * n, 2 * n), Ordering::Endpoint);
}

BoundaryCondition preset_neumann(int n) {
  if (n < 1) throw ValidationError("preset_neumann: n must be >= 1");
  return BoundaryCondition::from_matrix(CMatrix::Identity(2 * n, 2 * n), Ordering::Endpoint);
}

BoundaryCondition preset_quasi_periodic(double theta) {
  CMatrix u = CMatrix::Zero(2, 2);
  u(0, 1) = std::polar(1.0, theta);
  u(1, 0) = std::polar(1.0, -theta);
  return BoundaryCondition::from_matrix(u, Ordering::Endpoint);
}

double admissibility_residual(const BoundaryCondition& bc, const BoundaryTrace& trace) {
  const CMatrix& u = bc.matrix(trace.ordering);
  const CVector minus = trace.values - kI * trace.normal_derivatives;
  const CVector plus = trace.values + kI * trace.normal_derivatives;
  return (minus - u * plus).norm();
}

BoundarySystem assemble_boundary_system(const BoundaryCondition& bc, const Mesh& mesh) {
  if (bc.interval_count() != mesh.interval_count()) {
    std::ostringstream os;
    os << "boundary condition has n=" << bc.interval_count() << " but mesh has n=" << mesh.interval_count();
    throw ValidationError(os.str());
  }
  const int m = 2 * mesh.interval_count();
  BoundarySystem sys;
  sys.h = mesh.boundary_steps();
  sys.U = bc.endpoint_matrix();
  sys.F.resize(m, m);
  sys.C.resize(m, m);
  for (int l = 0; l < m; ++l) {
    for (int j = 0; j < m; ++j) {
      const double inv_h = 1.0 / sys.h(j);
      const Complex delta = (l == j) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
      sys.F(l, j) = delta * Complex(1.0, -inv_h) - sys.U(l, j) * Complex(1.0, inv_h);
      sys.C(l, j) = -kI * inv_h * (delta + sys.U(l, j));
    }
  }
  return sys;
}

ConditionReport condition_report(const BoundarySystem& sys) {
  ConditionReport report;
  Eigen::JacobiSVD<CMatrix> svd(sys.F);
  const auto& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(s.size() - 1);
  report.kappa_estimate = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();

  const Eigen::Index m = sys.U.rows();
  CVector ratio(m);
  for (Eigen::Index l = 0; l < m; ++l) {
    const Complex d(1.0, 1.0 / sys.h(l));
    ratio(l) = d / std::conj(d);
  }
  const CMatrix u0 = sys.U * ratio.asDiagonal();
  Eigen::ComplexEigenSolver<CMatrix> eig(u0, false);
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < m; ++k) {
    gap = std::min(gap, std::abs(1.0 - eig.eigenvalues()(k)));
  }
  report.spectrum_gap = gap;
  report.compatible = gap >= kSpectrumGapFloor;
  report.bound = report.compatible ? (sys.h.maxCoeff() / sys.h.minCoeff()) * 2.0 / gap
                                   : std::numeric_limits<double>::infinity();
  return report;
}

CVector BoundaryValues::normal_derivatives(int i) const {
  CVector out(V.rows());
  for (Eigen::Index l = 0; l < V.rows(); ++l) {
    const double delta = (l == i) ? 1.0 : 0.0;
    out(l) = -(delta - V(l, i)) / h(l);
  }
  return out;
}

BoundaryTrace BoundaryValues::trace(int i) const {
  return BoundaryTrace{V.col(i), normal_derivatives(i), Ordering::Endpoint};
}

namespace {

std::string describe_failure(const char* what, const ConditionReport& report, double kappa_max) {
  std::ostringstream os;
  os.precision(6);
  os << what << ": kappa(F) ~ " << report.kappa_estimate << " (kappa_max " << kappa_max
     << "), min |1 - spec(U0)| = " << report.spectrum_gap;
  return os.str();
}

}  // namespace

BoundaryValues solve_boundary_values(const BoundarySystem& sys, double kappa_max) {
  const ConditionReport report = condition_report(sys);
  if (!report.compatible) {
    throw ConditionFailure(describe_failure("boundary system incompatible at this h", report, kappa_max),
                           {{0, report.kappa_estimate, report.spectrum_gap}});
  }
  if (!(report.kappa_estimate <= kappa_max)) {
    throw ConditionFailure(describe_failure("boundary matrix too ill-conditioned", report, kappa_max),
                           {{0, report.kappa_estimate, report.spectrum_gap}});
  }

  BoundaryValues out;
  out.h = sys.h;
  const CMatrix raw = sys.F.partialPivLu().solve(sys.C);
  out.solve_residual = (sys.F * raw - sys.C).norm() / std::max(sys.C.norm(), 1.0);

  const Eigen::Index m = raw.rows();
  CMatrix g(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    g.row(i) = raw.row(i) / sys.h(i);
  }
  out.G.resize(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    out.G(i, i) = Complex(g(i, i).real(), 0.0);
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const Complex avg = 0.5 * (g(i, j) + std::conj(g(j, i)));
      out.G(i, j) = avg;
      out.G(j, i) = std::conj(avg);
    }
  }
  out.V.resize(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    out.V.row(i) = out.G.row(i) * sys.h(i);
  }
  return out;
}

Discretization retry_mesh_on_bad_conditioning(const BoundaryCondition& bc, const IntervalSet& geometry,
                                              int resolution, double kappa_max, int max_retries) {
  std::vector<ConditionAttempt> history;
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    const int n_try = resolution + attempt;
    Mesh mesh = build_mesh(geometry, n_try);
    BoundarySystem sys = assemble_boundary_system(bc, mesh);
    const ConditionReport report = condition_report(sys);
    history.push_back({n_try, report.kappa_estimate, report.spectrum_gap});
    if (report.compatible && report.kappa_estimate <= kappa_max) {
      BoundaryValues values = solve_boundary_values(sys, kappa_max);
      return Discretization{std::move(mesh), std::move(sys), std::move(values), report};
    }
  }
  std::ostringstream os;
  os << "no resolution in [" << resolution << ", " << resolution + max_retries
     << "] gives a boundary matrix with kappa <= " << kappa_max << "; kappa history:";
  for (const auto& h : history) os << ' ' << h.resolution << ':' << h.kappa_estimate;
  throw ConditionFailure(os.str(), std::move(history));
}

}  // namespace saext
