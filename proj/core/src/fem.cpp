#include "saext/fem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "quadrature.hpp"
#include "saext/errors.hpp"

namespace saext {

namespace {

void check_interval(const Mesh& mesh, int alpha) {
  if (alpha < 0 || alpha >= mesh.interval_count()) {
    std::ostringstream os;
    os << "interval index " << alpha << " out of range [0, " << mesh.interval_count() << ")";
    throw ValidationError(os.str());
  }
}

void check_point(const Mesh& mesh, int alpha, double x) {
  const Interval& iv = mesh.geometry()[alpha];
  const double slack = 1e-12 * std::max(1.0, std::abs(iv.a) + std::abs(iv.b));
  if (!(x >= iv.a - slack && x <= iv.b + slack)) {
    std::ostringstream os;
    os << "x=" << x << " lies outside interval " << alpha << " = [" << iv.a << ", " << iv.b << "]";
    throw ValidationError(os.str());
  }
}

void check_values(const Mesh& mesh, const BoundaryValues& bvals) {
  const int m = 2 * mesh.interval_count();
  if (bvals.V.rows() != m || bvals.V.cols() != m || bvals.h.size() != m) {
    std::ostringstream os;
    os << "boundary values are " << bvals.V.rows() << "x" << bvals.V.cols() << " but the mesh has " << m
       << " boundary slots";
    throw ValidationError(os.str());
  }
  const RVector h = mesh.boundary_steps();
  for (int l = 0; l < m; ++l) {
    if (std::abs(h(l) - bvals.h(l)) > 1e-14 * h(l)) {
      throw ValidationError("boundary values were solved on a different mesh");
    }
  }
}

// Local cell coordinate: cell index j (0..r) and s in [0,1].
std::pair<int, double> locate(const Mesh& mesh, int alpha, double x) {
  const Interval& iv = mesh.geometry()[alpha];
  const int r = mesh.interior_count(alpha);
  const double t = (x - iv.a) / mesh.step(alpha);
  const int j = std::clamp(static_cast<int>(std::floor(t)), 0, r);
  return {j, std::clamp(t - j, 0.0, 1.0)};
}

// Hermitian accumulation helpers. Mirrored entries receive conjugate updates in
// the same order, so A == A^H holds bit for bit.
void add_pair(CMatrix& m, int i, int j, Complex z) {
  if (i == j) {
    m(i, i) += Complex(2.0 * z.real(), 0.0);
  } else {
    m(i, j) += z;
    m(j, i) += std::conj(z);
  }
}

void add_upper(CMatrix& m, int i, int j, Complex z) {
  if (i == j) {
    m(i, i) += Complex(z.real(), 0.0);
  } else {
    m(i, j) += z;
    m(j, i) += std::conj(z);
  }
}

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // off[e] couples nodes e and e+1
};

}  // namespace

BasisTag basis_tag(const Mesh& mesh, int global_index) {
  if (global_index < 0 || global_index >= mesh.dim()) {
    throw ValidationError("basis index out of range");
  }
  for (int alpha = mesh.interval_count() - 1; alpha >= 0; --alpha) {
    if (global_index >= mesh.offset(alpha)) {
      const int k = global_index - mesh.offset(alpha) + 1;
      const int r = mesh.interior_count(alpha);
      BasisTag tag;
      tag.alpha = alpha;
      tag.node = k;
      if (k == 1) {
        tag.kind = BasisTag::Kind::Boundary;
        tag.slot = 2 * alpha;
      } else if (k == r) {
        tag.kind = BasisTag::Kind::Boundary;
        tag.slot = 2 * alpha + 1;
      }
      return tag;
    }
  }
  throw ValidationError("basis index out of range");
}

int bulk_index(const Mesh& mesh, int alpha, int k) {
  check_interval(mesh, alpha);
  const int r = mesh.interior_count(alpha);
  if (k < 2 || k > r - 1) {
    std::ostringstream os;
    os << "bulk node k=" << k << " outside [2, " << r - 1 << "] on interval " << alpha;
    throw ValidationError(os.str());
  }
  return mesh.offset(alpha) + k - 1;
}

int boundary_index(const Mesh& mesh, int slot) {
  if (slot < 0 || slot >= 2 * mesh.interval_count()) {
    std::ostringstream os;
    os << "boundary slot " << slot << " out of range [0, " << 2 * mesh.interval_count() << ")";
    throw ValidationError(os.str());
  }
  const int alpha = slot / 2;
  return slot % 2 == 0 ? mesh.offset(alpha) : mesh.offset(alpha) + mesh.interior_count(alpha) - 1;
}

double eval_bulk(const Mesh& mesh, int alpha, int k, double x) {
  bulk_index(mesh, alpha, k);
  check_point(mesh, alpha, x);
  const auto [j, s] = locate(mesh, alpha, x);
  if (j == k - 1) return s;
  if (j == k) return 1.0 - s;
  return 0.0;
}

Complex eval_boundary(const Mesh& mesh, const BoundaryValues& bvals, int slot, int alpha, double x) {
  boundary_index(mesh, slot);
  check_interval(mesh, alpha);
  check_point(mesh, alpha, x);
  const int r = mesh.interior_count(alpha);
  auto nodal = [&](int k) -> Complex {
    if (k == 0) return bvals.V(2 * alpha, slot);
    if (k == r + 1) return bvals.V(2 * alpha + 1, slot);
    if (k == 1) return slot == 2 * alpha ? 1.0 : 0.0;
    if (k == r) return slot == 2 * alpha + 1 ? 1.0 : 0.0;
    return 0.0;
  };
  const auto [j, s] = locate(mesh, alpha, x);
  return (1.0 - s) * nodal(j) + s * nodal(j + 1);
}

std::vector<Complex> nodal_values(const Mesh& mesh, const BoundaryValues& bvals, const CVector& coeffs,
                                  int alpha) {
  check_interval(mesh, alpha);
  check_values(mesh, bvals);
  if (coeffs.size() != mesh.dim()) throw ValidationError("coefficient vector does not match mesh dimension");
  const int r = mesh.interior_count(alpha);
  const int m = 2 * mesh.interval_count();
  std::vector<Complex> u(static_cast<std::size_t>(r + 2));
  for (int k = 1; k <= r; ++k) u[static_cast<std::size_t>(k)] = coeffs(mesh.offset(alpha) + k - 1);
  Complex left = 0.0;
  Complex right = 0.0;
  for (int slot = 0; slot < m; ++slot) {
    const Complex c = coeffs(boundary_index(mesh, slot));
    left += bvals.V(2 * alpha, slot) * c;
    right += bvals.V(2 * alpha + 1, slot) * c;
  }
  u.front() = left;
  u.back() = right;
  return u;
}

FieldPoint evaluate_field(const Mesh& mesh, const BoundaryValues& bvals, const CVector& coeffs, int alpha,
                          double x) {
  check_point(mesh, alpha, x);
  const auto u = nodal_values(mesh, bvals, coeffs, alpha);
  const auto [j, s] = locate(mesh, alpha, x);
  const Complex u0 = u[static_cast<std::size_t>(j)];
  const Complex u1 = u[static_cast<std::size_t>(j + 1)];
  return {(1.0 - s) * u0 + s * u1, (u1 - u0) / mesh.step(alpha)};
}

CMatrix boundary_bracket(const BoundaryValues& bvals) {
  const Eigen::Index m = bvals.V.rows();
  CMatrix out = CMatrix::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      Complex acc = 0.0;
      for (Eigen::Index k = 0; k < m; ++k) {
        const double delta = (k == j) ? 1.0 : 0.0;
        acc += std::conj(bvals.V(k, i)) * (bvals.V(k, j) - delta) / bvals.h(k);
      }
      out(i, j) = acc;
    }
  }
  return out;
}

Pencil assemble_pencil(const Mesh& mesh, const BoundaryValues& bvals, const Potential& potential,
                       const PencilOptions& options) {
  check_values(mesh, bvals);
  potential.check_compatible(mesh.geometry());
  if (options.quadrature_order < 1) throw ValidationError("quadrature order must be >= 1");
  if (!(options.mu > 0.0)) throw ValidationError("mass factor mu must be positive");

  const int dim = mesh.dim();
  const int n = mesh.interval_count();
  const int m = 2 * n;
  const double mu = options.mu;
  const auto rule = detail::gauss_legendre(options.quadrature_order);

  Pencil p;
  p.A = CMatrix::Zero(dim, dim);
  p.B = CMatrix::Zero(dim, dim);

  for (int alpha = 0; alpha < n; ++alpha) {
    const int r = mesh.interior_count(alpha);
    const double h = mesh.step(alpha);
    const auto x = mesh.nodes(alpha);

    // Nodal P1 matrices over all r+2 nodes of the interval.
    Tridiagonal stiff{std::vector<double>(static_cast<std::size_t>(r + 2), 0.0),
                      std::vector<double>(static_cast<std::size_t>(r + 1), 0.0)};
    Tridiagonal mass = stiff;
    for (int e = 0; e <= r; ++e) {
      double p00 = 0.0;
      double p01 = 0.0;
      double p11 = 0.0;
      if (potential.is_piecewise_constant()) {
        const double c = potential.constant_value(alpha);
        p00 = p11 = c * h / 3.0;
        p01 = c * h / 6.0;
      } else {
        const double mid = 0.5 * (x[static_cast<std::size_t>(e)] + x[static_cast<std::size_t>(e + 1)]);
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
          const double t = rule.nodes[q];
          const double w = rule.weights[q] * 0.5 * h;
          const double v = potential(mesh.geometry(), alpha, mid + 0.5 * h * t);
          const double phi0 = 0.5 * (1.0 - t);
          const double phi1 = 0.5 * (1.0 + t);
          p00 += w * v * phi0 * phi0;
          p01 += w * v * phi0 * phi1;
          p11 += w * v * phi1 * phi1;
        }
      }
      const auto ue = static_cast<std::size_t>(e);
      stiff.diag[ue] += mu / h + p00;
      stiff.diag[ue + 1] += mu / h + p11;
      stiff.off[ue] += -mu / h + p01;
      mass.diag[ue] += h / 3.0;
      mass.diag[ue + 1] += h / 3.0;
      mass.off[ue] += h / 6.0;
    }

    const int base = mesh.offset(alpha);
    auto g = [base](int k) { return base + k - 1; };

    auto scatter = [&](CMatrix& target, const Tridiagonal& t) {
      for (int k = 1; k <= r; ++k) {
        target(g(k), g(k)) += Complex(t.diag[static_cast<std::size_t>(k)], 0.0);
      }
      for (int k = 1; k < r; ++k) {
        add_pair(target, g(k), g(k + 1), t.off[static_cast<std::size_t>(k)]);
      }
      // Endpoint nodes carry V-weighted combinations of the boundary functions.
      const std::pair<int, int> ends[2] = {{0, 2 * alpha}, {r + 1, 2 * alpha + 1}};
      for (const auto& [node, slot] : ends) {
        const int neighbour = node == 0 ? 1 : r;
        const double off = t.off[static_cast<std::size_t>(node == 0 ? 0 : r)];
        const double d = t.diag[static_cast<std::size_t>(node)];
        for (int j = 0; j < m; ++j) {
          add_pair(target, boundary_index(mesh, j), g(neighbour), std::conj(bvals.V(slot, j)) * off);
        }
        for (int i = 0; i < m; ++i) {
          for (int j = i; j < m; ++j) {
            add_upper(target, boundary_index(mesh, i), boundary_index(mesh, j),
                      std::conj(bvals.V(slot, i)) * d * bvals.V(slot, j));
          }
        }
      }
    };
    scatter(p.A, stiff);
    scatter(p.B, mass);
  }

  const CMatrix bracket = boundary_bracket(bvals);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      add_upper(p.A, boundary_index(mesh, i), boundary_index(mesh, j), -mu * bracket(i, j));
    }
  }

  // Structural pattern: tridiagonal within each interval plus the dense
  // boundary-function block.
  p.pattern.assign(static_cast<std::size_t>(dim), {});
  std::vector<int> boundary(static_cast<std::size_t>(m));
  for (int l = 0; l < m; ++l) boundary[static_cast<std::size_t>(l)] = boundary_index(mesh, l);
  for (int alpha = 0; alpha < n; ++alpha) {
    const int r = mesh.interior_count(alpha);
    for (int k = 1; k <= r; ++k) {
      const int a = mesh.offset(alpha) + k - 1;
      auto& row = p.pattern[static_cast<std::size_t>(a)];
      if (k > 1) row.push_back(a - 1);
      row.push_back(a);
      if (k < r) row.push_back(a + 1);
      if (k == 1 || k == r) row.insert(row.end(), boundary.begin(), boundary.end());
      std::sort(row.begin(), row.end());
      row.erase(std::unique(row.begin(), row.end()), row.end());
    }
  }
  return p;
}

}  // namespace saext
