#include "frozen_values.hpp"
#include "test_helpers.hpp"

#include <imexstab/analysis.hpp>
#include <imexstab/discretize2d.hpp>
#include <imexstab/errors.hpp>
#include <imexstab/random_systems.hpp>

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

using namespace imexstab;

namespace {

double max_abs_eig(const DenseMatrix& m) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

PdeParams params_with(double eps, double eps0, AntidiffusionMode mode, double theta = 0.0) {
  PdeParams p;
  p.epsilon = eps;
  p.epsilon0 = eps0;
  p.mode = mode;
  p.theta = theta;
  return p;
}

}  // namespace

TEST(Convection, ZeroFieldGivesZeroMatrix) {
  EXPECT_EQ(DenseMatrix(assemble_convection(Grid2D(5), {0.0, 0.0})).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Convection, StencilEntries) {
  const Grid2D g(3);
  const DenseMatrix b = assemble_convection(g, {1.0, 0.0});
  EXPECT_DOUBLE_EQ(b(g.index(1, 1), g.index(2, 1)), 2.0);
  EXPECT_DOUBLE_EQ(b(g.index(2, 1), g.index(1, 1)), -2.0);
}

TEST(Convection, ExactlySkew) {
  for (int m : {3, 7, 31}) {
    EXPECT_EQ(max_skew_defect(assemble_convection(Grid2D(m), {std::cos(0.3), std::sin(0.3)})), 0.0);
  }
}

TEST(Diffusion, SingleNode) {
  const DenseMatrix a = assemble_diffusion(Grid2D(1), 1.0);
  ASSERT_EQ(a.rows(), 1);
  EXPECT_DOUBLE_EQ(a(0, 0), 16.0);
}

TEST(Diffusion, SmallestEigenvalueOracle) {
  const EigenRange r = symmetric_eigen_range(DenseMatrix(assemble_diffusion(Grid2D(3), 1.0)));
  EXPECT_NEAR(r.min, frozen::kLaplacianM3LambdaMin, 1e-12);
}

TEST(Diffusion, ExactlySymmetric) {
  for (int m : {3, 7, 31}) {
    EXPECT_EQ(max_asymmetry(assemble_diffusion(Grid2D(m), 0.37)), 0.0);
  }
}

TEST(Averaging, PartitionOfUnityInside) {
  const Grid2D g(5);
  const Vector s1 = averaging_operator(g) * Vector::Ones(g.size());
  for (int j = 1; j < 4; ++j) {
    for (int i = 1; i < 4; ++i) {
      EXPECT_DOUBLE_EQ(s1(g.index(i, j)), 1.0);
    }
  }
}

TEST(Averaging, SingleNodeAndSpectralRadius) {
  EXPECT_DOUBLE_EQ(DenseMatrix(averaging_operator(Grid2D(1)))(0, 0), 0.5);
  for (int m : {3, 7, 31}) {
    const SparseMatrix s = averaging_operator(Grid2D(m));
    EXPECT_EQ(max_asymmetry(s), 0.0);
    EXPECT_LE(max_abs_eig(DenseMatrix(s)), 1.0);
  }
}

TEST(Projection, FixesCoarseSpaceAndIsIdempotent) {
  const Grid2D g(31);
  const SparseMatrix pi = coarse_prolongation(g);
  const LinearOperator p = projection_operator(g);
  RandomMatrixSource src(5);
  const Vector coarse = src.normal_vector(pi.cols());
  const Vector v = pi * coarse;
  EXPECT_LE((p.apply(v) - v).cwiseAbs().maxCoeff(), 1e-12);

  const DenseMatrix pd = p.to_dense();
  EXPECT_LE((pd * pd - pd).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE(max_asymmetry(pd), 1e-12);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (pd + pd.transpose()), Eigen::EigenvaluesOnly);
  EXPECT_EQ((es.eigenvalues().array() > 0.5).count(), frozen::kProjectorRankM31);
}

TEST(Projection, UnsupportedGrids) {
  EXPECT_THROW(coarse_prolongation(Grid2D(4)), UnsupportedGrid);
  EXPECT_THROW(coarse_prolongation(Grid2D(1)), UnsupportedGrid);
  EXPECT_NO_THROW(coarse_prolongation(Grid2D(3)));
}

TEST(Antidiffusion, ZeroEps0IsZero) {
  const auto c = assemble_antidiffusion(Grid2D(7), params_with(1e-2, 0.0, AntidiffusionMode::kAveraging));
  EXPECT_EQ(c.apply(Vector(Vector::Ones(49))).norm(), 0.0);
}

TEST(Antidiffusion, ProjectionIsPsdOnRandomVectors) {
  const Grid2D g(15);
  const auto c = assemble_antidiffusion(g, params_with(1e-4, 1e-3, AntidiffusionMode::kProjection));
  RandomMatrixSource src(17);
  for (int i = 0; i < 1000; ++i) {
    const Vector x = src.normal_vector(g.size());
    EXPECT_GE(x.dot(c.apply(x)), -1e-12 * x.squaredNorm());
  }
}

TEST(Antidiffusion, FactorsAreSparseAndCheap) {
  const Grid2D g(31);
  for (auto mode : {AntidiffusionMode::kAveraging, AntidiffusionMode::kProjection}) {
    const auto c = assemble_antidiffusion(g, params_with(1e-4, 1e-4, mode));
    ASSERT_EQ(c.kind(), LinearOperator::Kind::kComposite);
    for (const auto& f : c.factors()) {
      if (f.kind() == LinearOperator::Kind::kSparse) {
        EXPECT_LE(f.max_row_nonzeros(), 9);
      } else {
        EXPECT_EQ(f.kind(), LinearOperator::Kind::kSpdInverse);
      }
    }
  }
}

TEST(Antidiffusion, AveragingSpectrumBelowDiffusion) {
  const Grid2D g(31);
  const auto p = params_with(1e-4, 1e-4, AntidiffusionMode::kAveraging, 17.0 * std::numbers::pi / 180);
  const DiscreteSystem d = assemble_system(g, p);
  const double c_max = symmetric_eigen_range(d.system.c().to_dense()).max;
  const double a_max = symmetric_eigen_range(DenseMatrix(d.ops.a)).max;
  EXPECT_LT(c_max, a_max);
  ASSERT_TRUE(d.report.has_value());
  EXPECT_TRUE(d.report->valid);
  EXPECT_GE(d.report->a_minus_c_psd_margin, 0.0);
}

TEST(Boundary, HorizontalSplit) {
  const auto phi = half_plane_boundary(0.0);
  const Grid2D g(7);
  for (const auto& p : boundary_points(g)) {
    if (p.y() == 1.0) EXPECT_EQ(phi(p.x(), p.y()), 1.0);
    if (p.y() == 0.0) EXPECT_EQ(phi(p.x(), p.y()), 0.0);
  }
}

TEST(Boundary, DefaultConfigurationCount) {
  const Grid2D g(31);
  const auto phi = half_plane_boundary(17.0 * std::numbers::pi / 180.0);
  const auto pts = boundary_points(g);
  int ones = 0;
  for (const auto& p : pts) ones += phi(p.x(), p.y()) == 1.0;
  EXPECT_EQ(static_cast<int>(pts.size()), frozen::kBoundaryPointsM31);
  EXPECT_EQ(ones, frozen::kBoundaryOnesM31);
}

TEST(Boundary, LiftOnlyTouchesBoundaryAdjacentNodes) {
  const Grid2D g(3);
  const Vector lift = lift_boundary(g, params_with(1e-2, 0.0, AntidiffusionMode::kAveraging, 0.0));
  EXPECT_EQ(lift(g.index(1, 1)), 0.0);
  EXPECT_GT(lift.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Boundary, ConstantDataGivesConstantSteadyState) {
  // phi = 1 everywhere: u = 1 solves the continuous problem, and the lifted
  // discrete system must reproduce it: (A + B - C) 1 = g.
  for (auto [eps0, q] : {std::pair{0.0, 2}, std::pair{1e-3, 1}, std::pair{1e-2, 2}, std::pair{5e-3, 3}}) {
    const Grid2D g(9);
    PdeParams p = params_with(1e-3, eps0, AntidiffusionMode::kAveraging, 0.4);
    p.q = q;
    const Vector lift = lift_boundary(g, p, [](double, double) { return 1.0; });
    const DiscreteSystem d = assemble_system(g, p, false);
    const Vector ones = Vector::Ones(g.size());
    const Vector lhs = d.ops.a * ones + d.ops.b * ones - d.system.c().apply(ones);
    EXPECT_LE((lhs - lift).cwiseAbs().maxCoeff(), 1e-10 * lift.cwiseAbs().maxCoeff())
        << "eps0=" << eps0 << " q=" << q;
  }
}

TEST(AssembleSystem, PureDiffusionAdvectionIsValid) {
  PdeParams p = params_with(1.0, 0.0, AntidiffusionMode::kAveraging, 0.0);
  const DiscreteSystem d = assemble_system(Grid2D(3), p);
  EXPECT_EQ(d.system.dim(), 9);
  ASSERT_TRUE(d.report);
  EXPECT_TRUE(d.report->valid);
}

TEST(AssembleSystem, ProjectionMarginsOracle) {
  const Grid2D g(31);
  const auto small = assemble_system(g, params_with(1e-4, 1e-4, AntidiffusionMode::kProjection));
  ASSERT_TRUE(small.report);
  EXPECT_NEAR(small.report->a_minus_c_psd_margin, frozen::kProjectionMarginEps1e4, 1e-9);
  EXPECT_TRUE(small.report->valid);
  // Anti-diffusion 10x the physical diffusion: A - C is indefinite. Reported,
  // not thrown.
  const auto large = assemble_system(g, params_with(1e-4, 1e-3, AntidiffusionMode::kProjection));
  ASSERT_TRUE(large.report);
  EXPECT_NEAR(large.report->a_minus_c_psd_margin, frozen::kProjectionMarginEps1e3, 1e-9);
  EXPECT_FALSE(large.report->valid);
}

TEST(AssembleSystem, DefaultConfiguration) {
  const PdeParams p;  // defaults: theta 17 deg, eps 1e-4, eps0 1e-4, averaging q=2
  const DiscreteSystem d = assemble_system(Grid2D(31), p);
  EXPECT_EQ(d.system.dim(), 961);
  EXPECT_TRUE(d.report && d.report->valid);
  EXPECT_TRUE(d.system.b().is_constant());
  EXPECT_EQ(d.system.initial_state().norm(), 0.0);
}

TEST(PdeParams, Validation) {
  EXPECT_THROW(params_with(0.0, 0.0, AntidiffusionMode::kAveraging).validate(), ConfigError);
  EXPECT_THROW(params_with(1.0, -1.0, AntidiffusionMode::kAveraging).validate(), ConfigError);
  PdeParams p;
  p.q = 0;
  EXPECT_THROW(p.validate(), ConfigError);
  EXPECT_THROW(Grid2D(0), ConfigError);
}

TEST(GridCsv, WritesOneRowPerNode) {
  const auto dir = testing_helpers::scratch_dir("grid_csv");
  const Grid2D g(3);
  write_grid_csv(dir / "g.csv", g, Vector::LinSpaced(9, 0, 8), {{"m", "3"}});
  const std::string text = testing_helpers::slurp(dir / "g.csv");
  EXPECT_EQ(text.rfind("# m=3\ni,j,x,y,u\n0,0,0.25,0.25,0\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 11);
  EXPECT_THROW(write_grid_csv(dir / "bad.csv", g, Vector::Zero(4), {}), StructuralError);
}

TEST(Diagnostic, SteadyStateRange) {
  const DiscreteSystem d = assemble_system(Grid2D(31), PdeParams{}, false);
  const Vector u = fixed_point(d.system);
  std::cout << "[diagnostic] default configuration steady state range: [" << u.minCoeff() << ", "
            << u.maxCoeff() << "]\n";
  SUCCEED();
}
