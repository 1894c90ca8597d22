#include "saext/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "saext/errors.hpp"

namespace saext {

CVector hadamard(const CVector& x, const CVector& y) {
  if (x.size() != y.size()) throw ValidationError("hadamard: size mismatch");
  return x.cwiseProduct(y);
}

CMatrix hadamard(const CMatrix& t, const CVector& x) {
  if (t.cols() != x.size()) throw ValidationError("hadamard: size mismatch");
  return t * x.asDiagonal();
}

CMatrix odot(const CMatrix& t, const CMatrix& psi) {
  const Eigen::Index n = psi.rows() / 2;
  if (psi.rows() != 2 * n || psi.cols() != 2 || t.rows() != 2 * n || t.cols() != 2 * n)
    throw ValidationError("odot: expected a 2n x 2n matrix and a 2n x 2 trace matrix");
  CMatrix out(2 * n, 2 * n);
  for (int ra = 0; ra < 2; ++ra) {
    const CMatrix t_left = t.block(ra * n, 0, n, n);
    const CMatrix t_right = t.block(ra * n, n, n, n);
    for (int sigma = 0; sigma < 2; ++sigma) {
      const CVector left = psi.col(sigma).head(n);
      const CVector right = psi.col(sigma).tail(n);
      out.block(ra * n, sigma * n, n, n) = hadamard(t_left, left) + hadamard(t_right, right);
    }
  }
  return out;
}

Complex FundamentalTraces::wronskian(int alpha) const {
  // left end: psidot = -Psi'
  const Complex p1 = values(alpha, 0), p2 = values(alpha, 1);
  const Complex d1 = -normal_derivatives(alpha, 0), d2 = -normal_derivatives(alpha, 1);
  return p1 * d2 - p2 * d1;
}

namespace {

// Values and x-derivatives of the two solutions at both endpoints of one
// interval: value[side][sigma], side 0 = left, 1 = right.
struct IntervalTraces {
  Complex value[2][2];
  Complex derivative[2][2];
};

// cos(sqrt(z)) and sin(sqrt(z))/sqrt(z), continued through z <= 0.
void cos_sinc(double z, double& c, double& s) {
  if (std::abs(z) < 1e-4) {
    c = 1.0 - z / 2.0 + z * z / 24.0 - z * z * z / 720.0;
    s = 1.0 - z / 6.0 + z * z / 120.0 - z * z * z / 5040.0;
  } else if (z > 0.0) {
    const double r = std::sqrt(z);
    c = std::cos(r);
    s = std::sin(r) / r;
  } else {
    const double r = std::sqrt(-z);
    c = std::cosh(r);
    s = std::sinh(r) / r;
  }
}

IntervalTraces cos_sin_closed_form(double length, double k2) {
  double c = 0.0, s = 0.0;
  cos_sinc(k2 * length * length, c, s);
  IntervalTraces t{};
  t.value[0][0] = 1.0;
  t.derivative[0][1] = 1.0;
  t.value[1][0] = c;
  t.derivative[1][0] = -k2 * length * s;
  t.value[1][1] = length * s;
  t.derivative[1][1] = c;
  return t;
}

// cosh(kappa (x - a)) and cosh(kappa (b - x)), each divided by cosh(kappa L)
// and by max(1, kappa).
IntervalTraces two_sided_closed_form(double length, double kappa) {
  const double sech = 1.0 / std::cosh(kappa * length);
  const double th = std::tanh(kappa * length);
  const double scale = 1.0 / std::max(1.0, kappa);
  IntervalTraces t{};
  t.value[0][0] = sech * scale;
  t.value[1][0] = scale;
  t.derivative[1][0] = kappa * th * scale;
  t.value[0][1] = scale;
  t.derivative[0][1] = -kappa * th * scale;
  t.value[1][1] = sech * scale;
  return t;
}

using OdeState = std::array<double, 4>;  // y1, y1', y2, y2'

// RK4 for y'' = ((V - lambda)/mu) y across interval alpha, starting at a (or
// at b when backward) from the data (1, 0) and (0, 1).
OdeState rk4(const Potential& potential, const IntervalSet& geometry, int alpha, double lambda, double mu, int steps,
             bool backward) {
  const Interval& iv = geometry[alpha];
  const double h = (backward ? -iv.length() : iv.length()) / steps;
  const double x0 = backward ? iv.b : iv.a;
  OdeState y{1.0, 0.0, 0.0, 1.0};
  auto q = [&](double x) { return (potential(geometry, alpha, x) - lambda) / mu; };
  double q0 = q(x0);
  for (int s = 0; s < steps; ++s) {
    const double x = x0 + h * s;
    const double qm = q(x + 0.5 * h);
    const double q1 = q(s + 1 == steps ? (backward ? iv.a : iv.b) : x + h);
    for (int sol = 0; sol < 2; ++sol) {
      const double u = y[2 * sol], v = y[2 * sol + 1];
      const double k1u = v, k1v = q0 * u;
      const double k2u = v + 0.5 * h * k1v, k2v = qm * (u + 0.5 * h * k1u);
      const double k3u = v + 0.5 * h * k2v, k3v = qm * (u + 0.5 * h * k2u);
      const double k4u = v + h * k3v, k4v = q1 * (u + h * k3u);
      y[2 * sol] = u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
      y[2 * sol + 1] = v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    q0 = q1;
  }
  return y;
}

OdeState integrate_interval(const Potential& potential, const IntervalSet& geometry, int alpha, double lambda,
                            double mu, const OdeOptions& ode, bool backward) {
  int steps = std::max(1, ode.initial_steps);
  OdeState coarse = rk4(potential, geometry, alpha, lambda, mu, steps, backward);
  for (int attempt = 0; attempt <= ode.max_halvings; ++attempt) {
    steps *= 2;
    const OdeState fine = rk4(potential, geometry, alpha, lambda, mu, steps, backward);
    double scale = 0.0, diff = 0.0;
    for (int i = 0; i < 4; ++i) {
      scale = std::max(scale, std::abs(fine[i]));
      diff = std::max(diff, std::abs(fine[i] - coarse[i]));
    }
    if (!std::isfinite(scale)) break;
    if (diff <= ode.relative_tolerance * scale) return fine;
    coarse = fine;
  }
  std::ostringstream msg;
  msg << "fundamental solutions on interval " << alpha << " did not converge at lambda = " << lambda;
  throw Error(msg.str());
}

IntervalTraces ode_cos_sin(const Potential& potential, const IntervalSet& geometry, int alpha, double lambda,
                           double mu, const OdeOptions& ode) {
  const OdeState y = integrate_interval(potential, geometry, alpha, lambda, mu, ode, false);
  IntervalTraces t{};
  t.value[0][0] = 1.0;
  t.derivative[0][1] = 1.0;
  t.value[1][0] = y[0];
  t.derivative[1][0] = y[1];
  t.value[1][1] = y[2];
  t.derivative[1][1] = y[3];
  return t;
}

IntervalTraces ode_two_sided(const Potential& potential, const IntervalSet& geometry, int alpha, double lambda,
                             double mu, const OdeOptions& ode) {
  const OdeState f = integrate_interval(potential, geometry, alpha, lambda, mu, ode, false);
  const OdeState b = integrate_interval(potential, geometry, alpha, lambda, mu, ode, true);
  const double sf = 1.0 / std::max({1.0, std::abs(f[0]), std::abs(f[1])});
  const double sb = 1.0 / std::max({1.0, std::abs(b[0]), std::abs(b[1])});
  IntervalTraces t{};
  t.value[0][0] = sf;
  t.value[1][0] = f[0] * sf;
  t.derivative[1][0] = f[1] * sf;
  t.value[1][1] = sb;
  t.value[0][1] = b[0] * sb;
  t.derivative[0][1] = b[1] * sb;
  return t;
}

FundamentalTraces assemble_traces(const std::vector<IntervalTraces>& per_interval) {
  const int n = static_cast<int>(per_interval.size());
  FundamentalTraces t;
  t.values.resize(2 * n, 2);
  t.normal_derivatives.resize(2 * n, 2);
  for (int alpha = 0; alpha < n; ++alpha) {
    const IntervalTraces& it = per_interval[static_cast<std::size_t>(alpha)];
    for (int sigma = 0; sigma < 2; ++sigma) {
      t.values(alpha, sigma) = it.value[0][sigma];
      t.normal_derivatives(alpha, sigma) = -it.derivative[0][sigma];
      t.values(n + alpha, sigma) = it.value[1][sigma];
      t.normal_derivatives(n + alpha, sigma) = it.derivative[1][sigma];
    }
  }
  return t;
}

void check_mu(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw ValidationError("mu must be positive and finite");
}

}  // namespace

FundamentalTraces integrate_fundamental_traces(const Potential& potential, const IntervalSet& geometry,
                                               double lambda, double mu, const OdeOptions& ode) {
  check_mu(mu);
  potential.check_compatible(geometry);
  std::vector<IntervalTraces> traces;
  for (int alpha = 0; alpha < geometry.size(); ++alpha)
    traces.push_back(ode_cos_sin(potential, geometry, alpha, lambda, mu, ode));
  return assemble_traces(traces);
}

FundamentalTraces fundamental_traces(const Potential& potential, const IntervalSet& geometry, double lambda,
                                     double mu, FundamentalBasis basis, const OdeOptions& ode) {
  check_mu(mu);
  potential.check_compatible(geometry);
  const int n = geometry.size();
  std::vector<IntervalTraces> traces(static_cast<std::size_t>(n));
  const bool constant = potential.is_piecewise_constant();
  if (basis == FundamentalBasis::Exponential && !constant)
    throw ValidationError("the exponential basis needs a piecewise-constant potential");
  const double vmin = constant ? 0.0 : potential.minimum(geometry);

  for (int alpha = 0; alpha < n; ++alpha) {
    const double length = geometry[alpha].length();
    IntervalTraces& t = traces[static_cast<std::size_t>(alpha)];
    if (basis == FundamentalBasis::Exponential) {
      const Complex k = std::sqrt(Complex((lambda - potential.constant_value(alpha)) / mu));
      const Complex e = std::exp(kI * k * length);
      t.value[0][0] = 1.0;
      t.value[0][1] = 1.0;
      t.derivative[0][0] = kI * k;
      t.derivative[0][1] = -kI * k;
      t.value[1][0] = e;
      t.value[1][1] = 1.0 / e;
      t.derivative[1][0] = kI * k * e;
      t.derivative[1][1] = -kI * k / e;
      continue;
    }
    const double qmin = ((constant ? potential.constant_value(alpha) : vmin) - lambda) / mu;
    const bool forbidden = basis == FundamentalBasis::Adaptive && qmin * length * length > 1.0;
    if (constant) {
      t = forbidden ? two_sided_closed_form(length, std::sqrt(qmin)) : cos_sin_closed_form(length, -qmin);
    } else {
      t = forbidden ? ode_two_sided(potential, geometry, alpha, lambda, mu, ode)
                    : ode_cos_sin(potential, geometry, alpha, lambda, mu, ode);
    }
  }
  return assemble_traces(traces);
}

CMatrix spectral_matrix(const BoundaryCondition& bc, const FundamentalTraces& traces) {
  const int n = traces.interval_count();
  if (bc.interval_count() != n) throw ValidationError("spectral_matrix: boundary condition and traces disagree on n");
  const CMatrix id = CMatrix::Identity(2 * n, 2 * n);
  return odot(id, traces.minus()) - odot(bc.block_matrix(), traces.plus());
}

Complex spectral_det(const BoundaryCondition& bc, const FundamentalTraces& traces) {
  return spectral_matrix(bc, traces).partialPivLu().determinant();
}

Complex trace_wronskian(const FundamentalTraces& traces, Side s1, Side s2, Sign p1, Sign p2) {
  if (traces.interval_count() != 1) throw ValidationError("trace_wronskian: single interval only");
  auto row = [&](Side s, Sign p) -> std::array<Complex, 2> {
    const int r = s == Side::Left ? 0 : 1;
    const double sign = p == Sign::Plus ? 1.0 : -1.0;
    return {traces.values(r, 0) + sign * kI * traces.normal_derivatives(r, 0),
            traces.values(r, 1) + sign * kI * traces.normal_derivatives(r, 1)};
  };
  const auto x = row(s1, p1);
  const auto y = row(s2, p2);
  return x[0] * y[1] - x[1] * y[0];
}

Complex spectral_det_closed_form(const BoundaryCondition& bc, const FundamentalTraces& traces) {
  if (bc.interval_count() != 1) throw ValidationError("closed form: single interval only");
  const CMatrix& u = bc.endpoint_matrix();
  using enum Side;
  using enum Sign;
  return trace_wronskian(traces, Left, Right, Minus, Minus) +
         u(0, 0) * trace_wronskian(traces, Right, Left, Minus, Plus) +
         u(1, 1) * trace_wronskian(traces, Right, Left, Plus, Minus) +
         u(0, 1) * trace_wronskian(traces, Right, Right, Minus, Plus) +
         u(1, 0) * trace_wronskian(traces, Left, Left, Plus, Minus) +
         u.determinant() * trace_wronskian(traces, Left, Right, Plus, Plus);
}

CMatrix unitary_from_parameters(const U2Parameters& p) {
  const double norm = std::norm(p.alpha) + std::norm(p.beta);
  if (std::abs(norm - 1.0) > 1e-12) throw ValidationError("unitary_from_parameters: |alpha|^2 + |beta|^2 != 1");
  CMatrix u(2, 2);
  u << p.alpha, p.beta, -std::conj(p.beta), std::conj(p.alpha);
  return std::exp(kI * (p.theta / 2.0)) * u;
}

U2Parameters parameters_from_unitary(const CMatrix& u) {
  if (u.rows() != 2 || u.cols() != 2) throw ValidationError("parameters_from_unitary: expected 2 x 2");
  U2Parameters p;
  p.theta = std::arg(u.determinant());
  const Complex phase = std::exp(-kI * (p.theta / 2.0));
  p.alpha = phase * u(0, 0);
  p.beta = phase * u(0, 1);
  return p;
}

Complex spectral_det_parametrized(const U2Parameters& p, const FundamentalTraces& traces) {
  using enum Side;
  using enum Sign;
  const Complex half = std::exp(kI * (p.theta / 2.0));
  const Complex middle = p.alpha * trace_wronskian(traces, Right, Left, Minus, Plus) +
                         std::conj(p.alpha) * trace_wronskian(traces, Right, Left, Plus, Minus) +
                         p.beta * trace_wronskian(traces, Right, Right, Minus, Plus) -
                         std::conj(p.beta) * trace_wronskian(traces, Left, Left, Plus, Minus);
  return trace_wronskian(traces, Left, Right, Minus, Minus) + half * middle +
         half * half * trace_wronskian(traces, Left, Right, Plus, Plus);
}

FreeParticleWronskians free_particle_wronskians(double lambda) {
  if (!(lambda > 0.0)) throw ValidationError("free_particle_wronskians: lambda must be positive");
  const double k = std::sqrt(2.0 * lambda);
  const double s = std::sin(2.0 * std::numbers::pi * k);
  const double c = std::cos(2.0 * std::numbers::pi * k);
  FreeParticleWronskians w;
  w.lr_mm = Complex(-4.0 * k * c, -2.0 * (1.0 + 2.0 * lambda) * s);
  w.ll_pm = 4.0 * k;
  w.rr_mp = 4.0 * k;
  w.rl_mp = Complex(0.0, 2.0 * (1.0 - 2.0 * lambda) * s);
  w.rl_pm = w.rl_mp;
  w.lr_pp = Complex(4.0 * k * c, -2.0 * (1.0 + 2.0 * lambda) * s);
  return w;
}

Complex free_particle_spectral_function(double lambda, const U2Parameters& p) {
  const FreeParticleWronskians w = free_particle_wronskians(lambda);
  const double k = std::sqrt(2.0 * lambda);
  const double s = std::sin(2.0 * std::numbers::pi * k);
  const Complex half = std::exp(kI * (p.theta / 2.0));
  const Complex middle = kI * (4.0 * p.alpha.real() * (1.0 - 2.0 * lambda) * s + 8.0 * p.beta.imag() * k);
  return w.lr_mm + half * middle + half * half * w.lr_pp;
}

double spectral_lower_bound(const BoundaryCondition& bc, const Potential& potential, const IntervalSet& geometry,
                            double mu) {
  check_mu(mu);
  Eigen::ComplexEigenSolver<CMatrix> es(bc.endpoint_matrix(), false);
  double t = 0.0;
  for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) {
    const Complex z = es.eigenvalues()(j);
    if (std::abs(1.0 + z) < 1e-10) continue;  // Dirichlet-type direction
    t = std::max(t, -std::tan(std::arg(z) / 2.0));
  }
  double min_length = geometry[0].length();
  for (int alpha = 1; alpha < geometry.size(); ++alpha) min_length = std::min(min_length, geometry[alpha].length());
  return potential.minimum(geometry) - mu * 2.0 * t * std::max(t, 2.0 / min_length);
}

std::vector<double> SpectrumResult::eigenvalues() const {
  std::vector<double> out;
  for (const auto& r : roots)
    for (int m = 0; m < r.multiplicity; ++m) out.push_back(r.lambda);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> scan_grid(const SpectrumOptions& options) {
  if (!(options.lambda_max > options.lambda_min)) throw ValidationError("scan range must satisfy min < max");
  if (!(options.grid_density > 0.0)) throw ValidationError("grid density must be positive");
  auto to_s = [](double l) { return std::copysign(std::sqrt(std::abs(l)), l); };
  const double s0 = to_s(options.lambda_min), s1 = to_s(options.lambda_max);
  const auto count = static_cast<std::size_t>(std::max(3.0, std::ceil(options.grid_density * (s1 - s0)) + 1.0));
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double s = s0 + (s1 - s0) * static_cast<double>(i) / static_cast<double>(count - 1);
    grid[i] = s * std::abs(s);
  }
  grid.front() = options.lambda_min;
  grid.back() = options.lambda_max;
  return grid;
}

namespace {

struct Probe {
  const BoundaryCondition& bc;
  const Potential& potential;
  const IntervalSet& geometry;
  const SpectrumOptions& options;

  // M with column (sigma, alpha) divided by the norm of the boundary data of
  // Psi^sigma_alpha. Those data never vanish, so the scaling is finite and
  // leaves the zeros of det M in place while removing the growth of the
  // fundamental solutions.
  CMatrix scaled_matrix(double lambda) const {
    return scaled_matrix(fundamental_traces(potential, geometry, lambda, options.mu, options.basis, options.ode));
  }

  CMatrix scaled_matrix(const FundamentalTraces& t) const {
    CMatrix m = spectral_matrix(bc, t);
    const int n = t.interval_count();
    for (int sigma = 0; sigma < 2; ++sigma) {
      for (int alpha = 0; alpha < n; ++alpha) {
        const double c = std::sqrt(std::norm(t.values(alpha, sigma)) + std::norm(t.normal_derivatives(alpha, sigma)) +
                                   std::norm(t.values(n + alpha, sigma)) +
                                   std::norm(t.normal_derivatives(n + alpha, sigma)));
        m.col(sigma * n + alpha) /= c;
      }
    }
    return m;
  }

  static double sigma_min(const CMatrix& m) {
    const RVector s = Eigen::JacobiSVD<CMatrix>(m).singularValues();
    return s(s.size() - 1);
  }
};

double golden_minimize(const std::function<double(double)>& f, double lo, double hi, double width) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > width; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<ScanPoint> scan_spectral_function(const BoundaryCondition& bc, const Potential& potential,
                                              const IntervalSet& geometry, const SpectrumOptions& options) {
  const Probe probe{bc, potential, geometry, options};
  std::vector<ScanPoint> out;
  for (double lambda : scan_grid(options)) {
    const FundamentalTraces t =
        fundamental_traces(potential, geometry, lambda, options.mu, options.basis, options.ode);
    const Complex det = spectral_det(bc, t);
    out.push_back({lambda, det, std::abs(probe.scaled_matrix(t).partialPivLu().determinant())});
  }
  return out;
}

SpectrumResult find_spectrum(const BoundaryCondition& bc, const Potential& potential, const IntervalSet& geometry,
                             const SpectrumOptions& options) {
  const Probe probe{bc, potential, geometry, options};
  const std::vector<ScanPoint> scan = scan_spectral_function(bc, potential, geometry, options);
  const std::size_t count = scan.size();

  SpectrumResult result;
  std::vector<double> values;
  values.reserve(count);
  for (const auto& p : scan) values.push_back(p.normalized_det);
  std::vector<double> sorted = values;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(count / 2), sorted.end());
  result.median_normalized_det = sorted[count / 2];
  const double threshold = options.atol + options.rtol * result.median_normalized_det;

  auto sigma = [&](double l) { return Probe::sigma_min(probe.scaled_matrix(l)); };
  const double bound = spectral_lower_bound(bc, potential, geometry, options.mu);

  for (std::size_t i = 0; i < count; ++i) {
    const bool left_ok = i == 0 || values[i] <= values[i - 1];
    const bool right_ok = i + 1 == count || values[i] < values[i + 1];
    if (!left_ok || !right_ok) continue;
    const bool at_edge = i == 0 || i + 1 == count;
    const double lo = scan[i == 0 ? 0 : i - 1].lambda;
    const double hi = scan[i + 1 == count ? i : i + 1].lambda;
    const double mid = scan[i].lambda;
    const double width = 1e-10 * std::max(1.0, std::abs(mid));
    const double lambda = golden_minimize(sigma, lo, hi, width);

    const CMatrix m = probe.scaled_matrix(lambda);
    const double nd = std::abs(m.partialPivLu().determinant());
    const RVector s = Eigen::JacobiSVD<CMatrix>(m).singularValues();
    const double smallest = s(s.size() - 1);
    if (nd > threshold || smallest > options.singular_threshold) continue;
    if (lambda < bound - 1e-9 * std::max(1.0, std::abs(bound))) {
      std::ostringstream msg;
      msg << "discarded candidate root " << lambda << " below the spectral lower bound " << bound;
      result.warnings.push_back(msg.str());
      continue;
    }

    if (at_edge) {
      std::ostringstream msg;
      msg << "spectral function minimum at the scan boundary near lambda = " << lambda;
      result.warnings.push_back(msg.str());
    }
    int multiplicity = 0;
    for (Eigen::Index j = 0; j < s.size(); ++j)
      if (s(j) <= options.singular_threshold) ++multiplicity;

    if (!result.roots.empty() && std::abs(result.roots.back().lambda - lambda) <= 10.0 * width) {
      auto& prev = result.roots.back();
      prev.multiplicity = std::max(prev.multiplicity, multiplicity);
      continue;
    }
    result.roots.push_back({lambda, std::max(1, multiplicity), nd, smallest});
  }
  return result;
}

std::vector<double> lowest_spectrum(const BoundaryCondition& bc, const Potential& potential,
                                    const IntervalSet& geometry, int count, SpectrumOptions options, double floor) {
  if (count <= 0) return {};
  const double bound = spectral_lower_bound(bc, potential, geometry, options.mu);
  const double lo = std::max(bound - 1.0 - 0.01 * std::abs(bound), floor);
  double span = 16.0;
  for (int attempt = 0; attempt < 24; ++attempt) {
    options.lambda_min = lo;
    options.lambda_max = lo + span;
    std::vector<double> ev = find_spectrum(bc, potential, geometry, options).eigenvalues();
    if (static_cast<int>(ev.size()) > count) {
      ev.resize(static_cast<std::size_t>(count));
      return ev;
    }
    span *= 4.0;
  }
  throw Error("lowest_spectrum: could not bracket the requested number of eigenvalues");
}

}  // namespace saext
