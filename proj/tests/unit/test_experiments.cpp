#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "saext/boundary.hpp"
#include "saext/errors.hpp"
#include "saext/experiments.hpp"

using namespace saext;

namespace {

constexpr double kPi = std::numbers::pi;

const IntervalSet& circle() {
  static const IntervalSet g({{0.0, 2.0 * kPi}});
  return g;
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Fits, LineRecoversExactData) {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  const std::vector<double> y{3.0, 5.0, 7.0, 9.0};
  const LinearFit f = fit_line(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.slope_stderr, 0.0, 1e-14);
  EXPECT_EQ(f.points, 4);
  EXPECT_THROW(fit_line({1.0}, {2.0}), ValidationError);
  const LinearFit g = fit_loglog({10.0, 100.0, 1000.0}, {1.0, 0.01, 1e-4});
  EXPECT_NEAR(g.slope, -2.0, 1e-12);
}

TEST(Fits, PowerLawRecoversExponent) {
  std::vector<double> eps, k;
  for (int i = 0; i <= 10; ++i) {
    eps.push_back(1e-5 * std::pow(100.0, i / 10.0));
    k.push_back(3.0 * std::pow(eps.back(), -0.5) + 0.2);
  }
  const auto fit = fit_power_law(eps, k);
  ASSERT_TRUE(fit.has_value());
  EXPECT_NEAR(fit->b, -0.5, 1e-6);
  EXPECT_NEAR(fit->a, 3.0, 1e-4);
  EXPECT_NEAR(fit->c, 0.2, 1e-2);
  EXPECT_LT(fit->rms, 1e-6 * k.front());
  EXPECT_FALSE(fit_power_law({1e-3, 2e-3, 3e-3}, {1.0, 2.0, 3.0}).has_value());
}

TEST(Parallel, EveryIndexOnceAndLowestErrorWins) {
  std::vector<std::atomic<int>> hits(100);
  parallel_for(100, 4, [&](int i) { hits[static_cast<std::size_t>(i)]++; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  try {
    parallel_for(50, 3, [](int i) {
      if (i == 7 || i == 31) throw std::runtime_error(std::to_string(i));
    });
    FAIL() << "expected an exception";
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "7");
  }
}

TEST(Perturbation, LinearOnPeriodicIsQuasiPeriodic) {
  const CMatrix u = preset_quasi_periodic(0.0).endpoint_matrix();
  const CMatrix a = default_perturbation_direction(2);
  for (double eps : {1e-4, 1e-2, 0.3}) {
    const PerturbedMatrix p = perturb_boundary_matrix(u, a, eps, PerturbationMode::Linear);
    EXPECT_NEAR(p.defect_before, std::sqrt(2.0) * eps * eps, 1e-12);
    EXPECT_LT(unitarity_defect(p.u), 1e-14);
    const double theta = std::atan(eps);
    const CMatrix expected = preset_quasi_periodic(theta).endpoint_matrix();
    const CMatrix expected_conj = preset_quasi_periodic(-theta).endpoint_matrix();
    EXPECT_LT(std::min(max_abs(p.u - expected), max_abs(p.u - expected_conj)), 1e-14);
  }
}

TEST(Perturbation, GeodesicOnPeriodicIsQuasiPeriodic) {
  const CMatrix u = preset_quasi_periodic(0.0).endpoint_matrix();
  const CMatrix a = default_perturbation_direction(2);
  for (double eps : {1e-4, 0.5}) {
    const PerturbedMatrix p = perturb_boundary_matrix(u, a, eps, PerturbationMode::Geodesic);
    EXPECT_EQ(p.defect_before, 0.0);
    const CMatrix expected = preset_quasi_periodic(eps).endpoint_matrix();
    const CMatrix expected_conj = preset_quasi_periodic(-eps).endpoint_matrix();
    EXPECT_LT(std::min(max_abs(p.u - expected), max_abs(p.u - expected_conj)), 1e-14);
  }
  const CMatrix d4 = default_perturbation_direction(4);
  EXPECT_EQ(d4(2, 3), Complex(1.0));
  EXPECT_EQ(d4(3, 2), Complex(-1.0));
  EXPECT_EQ(d4(0, 2), Complex(0.0));
}

TEST(Stability, MatchesQuasiPeriodicShift) {
  // Periodic base: the geodesic perturbation is quasi-periodic with phase eps,
  // whose spectrum is (m - eps / 2 pi)^2.
  StabilityOptions o;
  o.resolution = 120;
  o.levels = {0, 1, 3};
  o.mode = PerturbationMode::Geodesic;
  const std::vector<double> eps{0.0, 0.05};
  const StabilityStudy s = stability_study(circle(), preset_quasi_periodic(0.0), Potential::zero(), eps, o);
  ASSERT_EQ(s.rows.size(), 6u);
  for (const auto& row : s.rows) {
    if (row.epsilon == 0.0) {
      EXPECT_EQ(row.status, "undefined epsilon");
      continue;
    }
    if (row.level == 0) {
      EXPECT_EQ(row.status, "ill-conditioned ratio");
      continue;
    }
    EXPECT_EQ(row.status, "ok");
    const double shift = eps[1] / (2.0 * kPi);
    const double exact_delta = row.level == 1 ? (1.0 - shift) * (1.0 - shift) - 1.0
                                              : (2.0 - shift) * (2.0 - shift) - 4.0;
    EXPECT_NEAR(row.lambda - row.lambda0, exact_delta, 1e-2 * std::abs(exact_delta));
    EXPECT_NEAR(row.k, std::abs(row.lambda - row.lambda0) / (row.epsilon * std::abs(row.lambda0)), 1e-12);
  }
  ASSERT_EQ(s.fits.size(), 3u);
  EXPECT_FALSE(s.fits[1].fit.has_value());
}

TEST(Stability, ModesAndMatchingAgreeForSmallEpsilon) {
  StabilityOptions o;
  o.resolution = 80;
  o.levels = {3};
  const std::vector<double> eps{1e-3};
  const auto base = preset_quasi_periodic(0.0);
  const double linear = stability_study(circle(), base, Potential::zero(), eps, o).rows[0].lambda;
  o.mode = PerturbationMode::Geodesic;
  const double geodesic = stability_study(circle(), base, Potential::zero(), eps, o).rows[0].lambda;
  o.matching = LevelMatching::Nearest;
  const double nearest = stability_study(circle(), base, Potential::zero(), eps, o).rows[0].lambda;
  EXPECT_NEAR(linear, geodesic, 1e-8);
  EXPECT_NEAR(geodesic, nearest, 1e-6);
}

TEST(Convergence, SmallStudy) {
  const ConvergenceStudy s = dirichlet_convergence({40, 80, 160}, 1.0, 2);
  ASSERT_EQ(s.rows.size(), 3u);
  for (const auto& r : s.rows) {
    EXPECT_NEAR(r.eigenvalue, 0.25, 1e-2);
    EXPECT_NEAR(r.eigenvalue_error, std::abs(r.eigenvalue - 0.25), 1e-15);
  }
  ASSERT_TRUE(s.h1_fit.has_value());
  EXPECT_NEAR(s.h1_fit->slope, -1.0, 0.05);
  ASSERT_TRUE(s.eigenvalue_fit.has_value());
  EXPECT_NEAR(s.eigenvalue_fit->slope, -2.0, 0.1);

  const ConvergenceStudy single = dirichlet_convergence({50});
  EXPECT_EQ(single.rows.size(), 1u);
  EXPECT_FALSE(single.h1_fit.has_value());
}
