#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "saext/boundary.hpp"
#include "saext/errors.hpp"

using namespace saext;

namespace {

const double kTwoPi = 2.0 * std::numbers::pi;

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Ordering, PermutationMapsEndpointsToBlocks) {
  CVector e(4);
  e << 1.0, 2.0, 3.0, 4.0;  // l0 r0 l1 r1
  const CVector b = to_block_order(e);
  EXPECT_EQ(b(0), Complex(1.0));
  EXPECT_EQ(b(1), Complex(3.0));
  EXPECT_EQ(b(2), Complex(2.0));
  EXPECT_EQ(b(3), Complex(4.0));
  EXPECT_EQ(to_endpoint_order(b), e);
}

TEST(Ordering, MatrixRoundTrip) {
  std::mt19937_64 rng(1);
  const CMatrix u = random_unitary(6, rng);
  EXPECT_EQ(to_endpoint_order(to_block_order(u)), u);
  const BoundaryCondition bc = BoundaryCondition::from_matrix(to_block_order(u), Ordering::Block);
  EXPECT_EQ(bc.endpoint_matrix(), u);
}

TEST(BoundaryCondition, RejectsNonUnitaryWithDefect) {
  CMatrix u = CMatrix::Identity(2, 2);
  u(0, 1) = 1e-3;
  try {
    BoundaryCondition::from_matrix(u, Ordering::Endpoint);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("not unitary"), std::string::npos);
  }
  EXPECT_THROW(BoundaryCondition::from_matrix(CMatrix::Identity(3, 3), Ordering::Endpoint), ValidationError);
  EXPECT_THROW(BoundaryCondition::from_matrix(CMatrix::Identity(2, 4), Ordering::Endpoint), ValidationError);
}

TEST(BoundaryCondition, Presets) {
  EXPECT_EQ(preset_dirichlet(2).endpoint_matrix(), -CMatrix::Identity(4, 4));
  EXPECT_EQ(preset_neumann(1).endpoint_matrix(), CMatrix::Identity(2, 2));
  const CMatrix q = preset_quasi_periodic(0.3).endpoint_matrix();
  EXPECT_NEAR(std::abs(q(0, 1) - std::exp(Complex(0.0, 0.3))), 0.0, 1e-15);
  EXPECT_NEAR(unitarity_defect(q), 0.0, 1e-15);
}

TEST(Unitary, RandomIsUnitaryAndSeeded) {
  std::mt19937_64 a(5), b(5);
  const CMatrix u = random_unitary(4, a);
  EXPECT_LT(unitarity_defect(u), 1e-13);
  EXPECT_EQ(u, random_unitary(4, b));
}

TEST(Unitary, NearestUnitaryIsPolarFactor) {
  std::mt19937_64 rng(3);
  const CMatrix u = random_unitary(4, rng);
  EXPECT_LT(max_abs(nearest_unitary(u) - u), 1e-13);
  CMatrix p = u;
  p(0, 0) += 1e-3;
  const CMatrix w = nearest_unitary(p);
  EXPECT_LT(unitarity_defect(w), 1e-13);
  EXPECT_LT((w - p).norm(), 2e-3);
}

TEST(BoundaryValues, DirichletIsExactlyZero) {
  const Mesh mesh = build_mesh(IntervalSet({{0.0, kTwoPi}}), 250);
  const BoundaryValues bv = solve_boundary_values(assemble_boundary_system(preset_dirichlet(1), mesh));
  EXPECT_TRUE((bv.V.array() == Complex(0.0)).all());
}

TEST(BoundaryValues, NeumannIsIdentity) {
  const Mesh mesh = build_mesh(IntervalSet({{0.0, 1.0}, {0.0, 3.0}}), 20);
  const BoundaryValues bv = solve_boundary_values(assemble_boundary_system(preset_neumann(2), mesh));
  EXPECT_LT(max_abs(bv.V - CMatrix::Identity(4, 4)), 1e-12);
}

TEST(BoundaryValues, WeightedHermitianAndAdmissible) {
  std::mt19937_64 rng(17);
  const Mesh mesh = build_mesh(IntervalSet({{0.0, 1.0}, {0.0, 3.0}}), 30);
  for (int trial = 0; trial < 20; ++trial) {
    const BoundaryCondition bc = BoundaryCondition::from_matrix(random_unitary(4, rng), Ordering::Endpoint);
    const BoundarySystem sys = assemble_boundary_system(bc, mesh);
    const BoundaryValues bv = solve_boundary_values(sys);
    EXPECT_EQ(bv.G, bv.G.adjoint());
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) EXPECT_NEAR(std::abs(std::conj(bv.V(j, i)) / bv.h(j) - bv.V(i, j) / bv.h(i)), 0.0, 1e-12);
    for (int i = 0; i < 4; ++i) EXPECT_LT(admissibility_residual(bc, bv.trace(i)), 1e-9 / mesh.min_step());
    EXPECT_LT(bv.solve_residual, 1e-12);
  }
}

TEST(BoundaryValues, ConditionBoundHolds) {
  std::mt19937_64 rng(23);
  const Mesh mesh = build_mesh(IntervalSet({{0.0, 0.5}, {0.0, 3.0}}), 40);
  for (int trial = 0; trial < 50; ++trial) {
    const BoundaryCondition bc = BoundaryCondition::from_matrix(random_unitary(4, rng), Ordering::Endpoint);
    const ConditionReport r = condition_report(assemble_boundary_system(bc, mesh));
    EXPECT_TRUE(r.compatible);
    EXPECT_LE(r.kappa_estimate, r.bound * (1.0 + 1e-12));
  }
}

namespace {

// U = D conj(D)^{-1}, D = diag(1 + i/h), makes F = conj(D) - U D vanish.
CMatrix singular_u(const Mesh& mesh) {
  const RVector h = mesh.boundary_steps();
  CMatrix u = CMatrix::Zero(h.size(), h.size());
  for (Eigen::Index k = 0; k < h.size(); ++k) {
    const Complex d(1.0, 1.0 / h(k));
    u(k, k) = std::conj(d) / d;
  }
  return u;
}

}  // namespace

TEST(BoundaryValues, IncompatibleSystemThrowsAndRetryRecovers) {
  const IntervalSet geom({{0.0, 1.0}});
  const Mesh mesh = build_mesh(geom, 10);
  const BoundaryCondition bc = BoundaryCondition::from_matrix(singular_u(mesh), Ordering::Endpoint);
  const BoundarySystem sys = assemble_boundary_system(bc, mesh);
  EXPECT_FALSE(condition_report(sys).compatible);
  EXPECT_THROW(solve_boundary_values(sys), ConditionFailure);

  const Discretization d = retry_mesh_on_bad_conditioning(bc, geom, 10);
  EXPECT_EQ(d.mesh.resolution(), 11);
  try {
    retry_mesh_on_bad_conditioning(bc, geom, 10, kDefaultKappaMax, 0);
    FAIL() << "expected ConditionFailure";
  } catch (const ConditionFailure& e) {
    ASSERT_EQ(e.history().size(), 1u);
    EXPECT_EQ(e.history()[0].resolution, 10);
    EXPECT_LT(e.spectrum_gap(), 1e-12);
  }
}
