#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lindbladkit/errors.hpp"
#include "lindbladkit/lindblad.hpp"
#include "lindbladkit/models.hpp"
#include "random_ops.hpp"

namespace lk = lindbladkit;
using lk::Complex;
using lk::ComplexMatrix;

namespace {

double superop_residual(const lk::LindbladGenerator& a, const lk::LindbladGenerator& b) {
  return (lk::generator_superoperator(a).a - lk::generator_superoperator(b).a).max_abs();
}

TEST(LindbladGenerator, RejectsNonHermitianHamiltonian) {
  ComplexMatrix h = lk::pauli::x();
  h(0, 1) = 2.0;
  try {
    lk::LindbladGenerator g(h, {});
    FAIL();
  } catch (const lk::Error& e) {
    EXPECT_EQ(e.code(), lk::ErrorCode::NotHermitian);
  }
}

TEST(LindbladGenerator, RejectsMismatchedOperator) {
  EXPECT_THROW(lk::LindbladGenerator(ComplexMatrix(2, 2), {ComplexMatrix::identity(3)}), lk::Error);
}

TEST(ApplyGenerator, HamiltonianOnlyAnnihilatesMaximallyMixed) {
  std::mt19937_64 rng(1);
  const lk::LindbladGenerator g(lk::testing::random_hermitian(rng, 3), {});
  EXPECT_LT(lk::apply_generator(g, lk::DensityMatrix::maximally_mixed(3).matrix()).max_abs(), 1e-15);
}

TEST(ApplyGenerator, RandomPhasesDecay) {
  const auto g = lk::build_generator(lk::ModelSpec::random_phases(1.0, 1.0));
  const ComplexMatrix rho = lk::DensityMatrix::pure(std::vector<Complex>{std::sqrt(0.5), std::sqrt(0.5)}).matrix();
  const ComplexMatrix d = lk::apply_generator(g, rho);
  EXPECT_NEAR(std::abs(d(0, 1) + rho(0, 1)), 0.0, 1e-15);
  EXPECT_EQ(d(0, 0), Complex{});
  EXPECT_EQ(d(1, 1), Complex{});
}

TEST(ApplyGenerator, RandomUnitaryEntrywiseRates) {
  const double lambda = 0.7;
  const std::vector<double> gv{0.0, 1.0, 3.0};
  const auto g = lk::build_generator(lk::ModelSpec::random_unitary(lambda, ComplexMatrix::diagonal(std::span<const double>(gv))));
  std::mt19937_64 rng(2);
  const ComplexMatrix rho = lk::testing::random_density(rng, 3).matrix();
  const ComplexMatrix d = lk::apply_generator(g, rho);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      const double gap = gv[i] - gv[j];
      EXPECT_NEAR(std::abs(d(i, j) + 0.5 * lambda * gap * gap * rho(i, j)), 0.0, 1e-14);
    }
}

TEST(Liouvillian, MatchesApplyGenerator) {
  std::mt19937_64 rng(3);
  const lk::LindbladGenerator g(lk::testing::random_hermitian(rng, 3),
                                {lk::testing::random_matrix(rng, 3, 3), lk::testing::random_matrix(rng, 3, 3)});
  const ComplexMatrix lv = lk::liouvillian(g);
  const ComplexMatrix rho = lk::testing::random_matrix(rng, 3, 3);
  const ComplexMatrix via(3, 3, lv * std::span<const Complex>(rho.entries()));
  EXPECT_LT((via - lk::apply_generator(g, rho)).max_abs(), 1e-12);
}

TEST(EvolveRk4, StateTransitionsMatchesClosedForm) {
  const auto spec = lk::ModelSpec::state_transitions(1.0, {0.4, 0.3, 0.2, 0.1});
  std::mt19937_64 rng(4);
  const auto rho0 = lk::testing::random_density(rng, 4);
  const auto traj = lk::evolve_rk4(lk::build_generator(spec), rho0, 1e-4, 10000);
  ASSERT_EQ(traj.size(), 10001u);
  const auto exact = lk::analytic_solution(spec, rho0, 1.0);
  for (std::size_t r = 0; r < 4; ++r) {
    const double expect = rho0(r, r).real() * std::exp(-1.0) + spec.p[r] * (1.0 - std::exp(-1.0));
    EXPECT_NEAR(traj.back()(r, r).real(), expect, 1e-8);
  }
  EXPECT_LT((traj.back().matrix() - exact.matrix()).max_abs(), 1e-8);
}

TEST(EvolveRk4, StateExchangePopulation) {
  const auto spec = lk::ModelSpec::state_exchange(0.8);
  const auto rho0 = lk::DensityMatrix::pure(std::vector<Complex>{1.0, 0.0});
  const auto traj = lk::evolve_rk4(lk::build_generator(spec), rho0, 1e-3, 1500);
  EXPECT_NEAR(traj.back()(0, 0).real(), 0.5 + 0.5 * std::exp(-2.0 * 0.8 * 1.5), 1e-10);
}

TEST(EvolveRk4, ZeroGeneratorIsConstant) {
  std::mt19937_64 rng(5);
  const auto rho0 = lk::testing::random_density(rng, 3);
  const auto traj = lk::evolve_rk4(lk::LindbladGenerator(ComplexMatrix(3, 3), {}), rho0, 0.01, 50);
  for (const auto& rho : traj) EXPECT_EQ(rho.matrix(), rho0.matrix());
}

TEST(EvolveRk4, StepGuard) {
  const auto g = lk::build_generator(lk::ModelSpec::state_exchange(1.0));
  const auto rho0 = lk::DensityMatrix::maximally_mixed(2);
  try {
    lk::evolve_rk4(g, rho0, 0.5, 2);
    FAIL();
  } catch (const lk::Error& e) {
    EXPECT_EQ(e.code(), lk::ErrorCode::StepTooLarge);
    EXPECT_NEAR(e.value(), 0.5, 1e-12);
  }
  EXPECT_THROW(lk::evolve_rk4(g, rho0, 0.0, 2), lk::Error);
  EXPECT_THROW(lk::evolve_rk4(g, rho0, -1e-3, 2), lk::Error);
}

TEST(EvolveExact, UnitaryJumpOffDiagonal) {
  const double lambda = 1.3;
  const double gap = 0.9;
  const auto spec = lk::ModelSpec::unitary_jump(lambda, ComplexMatrix::diagonal(std::vector<double>{0.2, 0.2 + gap}));
  const auto rho0 = lk::DensityMatrix::pure(std::vector<Complex>{std::sqrt(0.5), Complex(0, std::sqrt(0.5))});
  const double t = 0.8;
  const auto rho = lk::evolve_exact(lk::build_generator(spec), rho0, t);
  const Complex expect = rho0(0, 1) * std::exp(-lambda * (1.0 - std::exp(Complex(0, gap))) * t);
  EXPECT_NEAR(std::abs(rho(0, 1) - expect), 0.0, 1e-12);
  EXPECT_NEAR(std::log(std::abs(rho0(0, 1)) / std::abs(rho(0, 1))) / t, lambda * (1.0 - std::cos(gap)), 1e-12);
}

TEST(EvolveExact, ZeroTimeReturnsInput) {
  std::mt19937_64 rng(6);
  const auto rho0 = lk::testing::random_density(rng, 2);
  const auto g = lk::build_generator(lk::ModelSpec::state_exchange(1.0));
  EXPECT_EQ(lk::evolve_exact(g, rho0, 0.0).matrix(), rho0.matrix());
}

TEST(EvolveExact, RandomPhasesFactor) {
  const auto rho0 = lk::DensityMatrix::pure(std::vector<Complex>{std::sqrt(0.5), std::sqrt(0.5)});
  const auto rho = lk::evolve_exact(lk::build_generator(lk::ModelSpec::random_phases(1.0, 1.0)), rho0, 1.0);
  EXPECT_NEAR(std::abs(rho(0, 1)) / std::abs(rho0(0, 1)), std::exp(-1.0), 1e-12);
}

TEST(EvolveExact, RejectsNegativeTime) {
  const auto g = lk::build_generator(lk::ModelSpec::state_exchange(1.0));
  EXPECT_THROW(lk::evolve_exact(g, lk::DensityMatrix::maximally_mixed(2), -1.0), lk::Error);
}

TEST(ExactPropagator, ComposesAsSemigroup) {
  std::mt19937_64 rng(7);
  const lk::LindbladGenerator g(lk::testing::random_hermitian(rng, 2), {lk::testing::random_matrix(rng, 2, 2)});
  const lk::ExactPropagator p(g);
  EXPECT_LT((p.propagator(0.3) * p.propagator(0.4) - p.propagator(0.7)).max_abs(), 1e-12);
}

TEST(Canonicalize, IdentityOperatorVanishes) {
  std::mt19937_64 rng(8);
  const ComplexMatrix h = lk::testing::random_hermitian(rng, 2);
  ComplexMatrix l = ComplexMatrix::identity(2);
  l *= Complex(0.7, -1.2);
  const lk::LindbladGenerator g(h, {l});
  const auto c = lk::canonicalize(g);
  EXPECT_TRUE(c.ops.empty());
  EXPECT_LT((c.hamiltonian - h).max_abs(), 1e-12);
}

TEST(Canonicalize, DuplicateOperatorsMerge) {
  const lk::LindbladGenerator g(ComplexMatrix(2, 2), {lk::pauli::x(), lk::pauli::x()});
  const auto c = lk::canonicalize(g);
  ASSERT_EQ(c.ops.size(), 1u);
  EXPECT_NEAR(c.rates[0], 4.0, 1e-14);
  const Complex phase = c.ops[0](0, 1) / std::abs(c.ops[0](0, 1));
  ComplexMatrix expect = lk::pauli::x();
  expect *= phase / std::sqrt(2.0);
  EXPECT_LT((c.ops[0] - expect).max_abs(), 1e-14);
  EXPECT_LT(superop_residual(c.to_generator(), g), 1e-13);
}

TEST(Canonicalize, FiveRandomOpsReduceToThree) {
  std::mt19937_64 rng(9);
  std::vector<ComplexMatrix> ops;
  for (int k = 0; k < 5; ++k) ops.push_back(lk::testing::random_matrix(rng, 2, 2));
  const lk::LindbladGenerator g(lk::testing::random_hermitian(rng, 2), ops);
  const auto c = lk::canonicalize(g);
  EXPECT_LE(c.ops.size(), 3u);
  for (std::size_t a = 0; a < c.ops.size(); ++a) {
    EXPECT_LT(std::abs(c.ops[a].trace()), 1e-12);
    for (std::size_t b = 0; b < c.ops.size(); ++b) {
      EXPECT_NEAR(std::abs(lk::frobenius_inner(c.ops[a], c.ops[b])), a == b ? 1.0 : 0.0, 1e-12);
    }
  }
  EXPECT_LT(superop_residual(c.to_generator(), g), 1e-10);
}

TEST(Canonicalize, TraceShiftEntersHamiltonian) {
  ComplexMatrix lower = ComplexMatrix::unit(2, 1, 0);
  const lk::LindbladGenerator g(lk::pauli::z(), {lower + Complex(0.3, 0.5) * ComplexMatrix::identity(2)});
  const auto c = lk::canonicalize(g);
  EXPECT_EQ(c.ops.size(), 1u);
  EXPECT_LT(superop_residual(c.to_generator(), g), 1e-13);
  EXPECT_GT((c.hamiltonian - g.hamiltonian()).max_abs(), 0.1);
}

TEST(Canonicalize, StateTransitionsDropsOneDirection) {
  const auto g = lk::build_generator(lk::ModelSpec::state_transitions(1.0, {0.4, 0.3, 0.2, 0.1}));
  const auto c = lk::canonicalize(g);
  EXPECT_EQ(g.lindblad_ops().size(), 16u);
  EXPECT_LE(c.ops.size(), 15u);
  EXPECT_LT(superop_residual(c.to_generator(), g), 1e-10);
}

TEST(DtKraus, StateExchangeOperators) {
  const double lambda = 0.6, dt = 1e-3;
  const auto k = lk::dt_kraus(lk::build_generator(lk::ModelSpec::state_exchange(lambda)), dt);
  ASSERT_EQ(k.ops.size(), 2u);
  ComplexMatrix m0 = ComplexMatrix::identity(2);
  m0 *= 1.0 - lambda * dt / 2.0;
  EXPECT_LT((k.ops[0] - m0).max_abs(), 1e-16);
  EXPECT_LT((k.ops[1] - std::sqrt(lambda * dt) * lk::pauli::x()).max_abs(), 1e-16);
}

TEST(DtKraus, CompletenessDefectIsSecondOrder) {
  const auto g = lk::build_generator(lk::ModelSpec::state_exchange(1.0));
  const double d1 = lk::completeness_defect(lk::dt_kraus(g, 1e-3));
  const double d2 = lk::completeness_defect(lk::dt_kraus(g, 5e-4));
  EXPECT_LE(d1, 1e-5);
  EXPECT_NEAR(d1 / d2, 4.0, 1e-3);
}

TEST(DtKraus, HamiltonianOnlyIsEulerStep) {
  const double dt = 1e-3;
  const auto k = lk::dt_kraus(lk::LindbladGenerator(lk::pauli::z(), {}), dt);
  ASSERT_EQ(k.ops.size(), 1u);
  EXPECT_LT((k.ops[0] - (ComplexMatrix::identity(2) - (lk::kI * dt) * lk::pauli::z())).max_abs(), 1e-16);
}

}  // namespace
