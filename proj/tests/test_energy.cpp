#include "frozen_values.hpp"
#include "test_helpers.hpp"

#include <imexstab/energy.hpp>
#include <imexstab/errors.hpp>
#include <imexstab/random_systems.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace imexstab;
using testing_helpers::diag;
using testing_helpers::vec;

namespace {

EnergyMetric metric(const DenseMatrix& c, double k) { return EnergyMetric(LinearOperator::dense(c), k); }

}  // namespace

TEST(EnergyNorm, ZeroCReducesToTwoNorm) {
  EXPECT_DOUBLE_EQ(energy_norm(metric(DenseMatrix::Zero(2, 2), 7.0), vec({3.0, 4.0})), 5.0);
}

TEST(EnergyNorm, ZeroVector) {
  EXPECT_EQ(energy_norm(metric(DenseMatrix::Identity(2, 2), 1.0), Vector::Zero(2)), 0.0);
}

TEST(EnergyNorm, IdentityC) {
  EXPECT_DOUBLE_EQ(energy_norm(metric(DenseMatrix::Identity(2, 2), 1.0), vec({1.0, 1.0})), 2.0);
}

TEST(EnergyNorm, RejectsIndefiniteCAndBadTimestep) {
  EXPECT_THROW(metric(diag({1.0, -1.0}), 1.0), StructuralError);
  EXPECT_THROW(metric(DenseMatrix::Identity(2, 2), 0.0), StructuralError);
  EXPECT_THROW(metric(DenseMatrix::Identity(2, 2), -1.0), StructuralError);
  EXPECT_THROW(energy_norm(metric(DenseMatrix::Identity(2, 2), 1.0), Vector::Zero(3)),
               StructuralError);
}

TEST(EnergyInner, ZeroCIsDotProduct) {
  EXPECT_EQ(energy_inner(metric(DenseMatrix::Zero(2, 2), 1.0), vec({1.0, 0.0}), vec({0.0, 1.0})),
            0.0);
}

TEST(EnergyInner, DiagonalOracle) {
  EXPECT_DOUBLE_EQ(energy_inner(metric(diag({1.0, 2.0}), 0.5), vec({1.0, 1.0}), vec({1.0, 1.0})),
                   frozen::kEnergyInner);
}

TEST(NormEquivalence, Examples) {
  auto b = norm_equivalence_bounds(metric(DenseMatrix::Zero(2, 2), 5.0));
  EXPECT_DOUBLE_EQ(b.first, 1.0);
  EXPECT_DOUBLE_EQ(b.second, 1.0);
  b = norm_equivalence_bounds(metric(DenseMatrix::Identity(2, 2), 3.0));
  EXPECT_DOUBLE_EQ(b.first, 2.0);
  EXPECT_DOUBLE_EQ(b.second, 2.0);
  b = norm_equivalence_bounds(metric(diag({0.0, 4.0}), 2.0));
  EXPECT_DOUBLE_EQ(b.first, frozen::kEquivLo);
  EXPECT_DOUBLE_EQ(b.second, frozen::kEquivHi);
}

TEST(EnergyMetric, PrecomputedSpectrumMatchesEigensolve) {
  const DenseMatrix c = diag({0.5, 3.0});
  const EnergyMetric a(LinearOperator::dense(c), 2.0);
  const EnergyMetric b(LinearOperator::dense(c), 2.0, EigenRange{0.5, 3.0});
  EXPECT_NEAR(a.lambda_min_c(), b.lambda_min_c(), 1e-14);
  EXPECT_NEAR(a.lambda_max_c(), b.lambda_max_c(), 1e-14);
  EXPECT_EQ(a.with_timestep(4.0).k(), 4.0);
  EXPECT_EQ(a.with_timestep(4.0).lambda_max_c(), a.lambda_max_c());
}

TEST(EnergyNormProperty, SandwichInnerProductAndSmallK) {
  RandomMatrixSource src(42);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = src.integer(1, 12);
    const DenseMatrix c = src.psd(n, src.integer(0, static_cast<int>(n)));
    const double k = src.log_uniform(-3, 3);
    const EnergyMetric m(LinearOperator::dense(c), k);
    const Vector u = src.normal_vector(n), v = src.normal_vector(n);
    const double e = energy_norm(m, u);
    const auto [lo, hi] = norm_equivalence_bounds(m);
    EXPECT_GE(e, lo * u.norm() * (1 - 1e-12));
    EXPECT_LE(e, hi * u.norm() * (1 + 1e-12));
    EXPECT_NEAR(energy_inner(m, u, u), e * e, 1e-12 * e * e);
    // Parallelogram law.
    const double lhs = std::pow(energy_norm(m, u + v), 2) + std::pow(energy_norm(m, u - v), 2);
    const double rhs = 2 * energy_inner(m, u, u) + 2 * energy_inner(m, v, v);
    EXPECT_NEAR(lhs, rhs, 1e-11 * rhs);
    // k -> 0 limit.
    const EnergyMetric small = m.with_timestep(1e-6);
    EXPECT_LE(std::abs(energy_norm(small, u) - u.norm()),
              1e-6 * small.lambda_max_c() * u.norm() + 1e-15 * u.norm());
  }
}

TEST(EnergyOperatorNorm, ScalesByUpperEquivalenceConstant) {
  const EnergyMetric m = metric(diag({0.0, 4.0}), 2.0);
  EXPECT_DOUBLE_EQ(energy_operator_norm_bound(m, 2.0), 6.0);
}
