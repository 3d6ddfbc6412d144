#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "trslab/eig_equiv.hpp"
#include "trslab/errors.hpp"
#include "trslab/lanczos.hpp"
#include "trslab/trs_solver.hpp"

using namespace trslab;

namespace {

Eigen::MatrixXd toEigen(const DenseMatrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

Vector gaussian(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Vector v(n);
  for (auto& x : v) x = gauss(rng);
  return v;
}

}  // namespace

TEST(ProjectedM, Assembly) {
  const DenseMatrix m = assembleProjectedM({{2}, {}}, 3.0, 1.0);
  EXPECT_DOUBLE_EQ(m(0, 0), -2);
  EXPECT_DOUBLE_EQ(m(0, 1), 9);
  EXPECT_DOUBLE_EQ(m(1, 0), 1);
  EXPECT_DOUBLE_EQ(m(1, 1), -2);
  const DenseMatrix z = assembleProjectedM({{0}, {}}, 1.5, 1.5);
  EXPECT_DOUBLE_EQ(z(0, 0), 0);
  EXPECT_DOUBLE_EQ(z(0, 1), 1);
  EXPECT_DOUBLE_EQ(z(1, 0), 1);
  EXPECT_DOUBLE_EQ(z(1, 1), 0);
}

TEST(ProjectedM, EqualsProjectionOfFullAugmentedMatrix) {
  const std::size_t n = 50, k = 5;
  Vector d = gaussian(n, 1);
  const auto a = SymmetricLinearOperator::fromDiagonal(d);
  const Vector g = gaussian(n, 2);
  const double delta = 0.7;
  const auto f = lanczosRun(a, g, k);
  const Eigen::MatrixXd M = toEigen(AugmentedOperator(a, g, delta).assembleDense());
  const Eigen::MatrixXd Q = toEigen(f.Q);
  Eigen::MatrixXd QQ = Eigen::MatrixXd::Zero(2 * n, 2 * (k + 1));
  QQ.topLeftCorner(n, k + 1) = Q;
  QQ.bottomRightCorner(n, k + 1) = Q;
  const Eigen::MatrixXd proj = QQ.transpose() * M * QQ;
  const Eigen::MatrixXd mk = toEigen(assembleProjectedM(f.T, f.beta0, delta));
  EXPECT_LE((proj - mk).norm(), 1e-12 * M.norm());
}

TEST(ProjectedM, MatrixFreeMatchesDense) {
  const SymmetricTridiagonal t{{1, -2, 0.5}, {0.3, 0.7}};
  const DenseMatrix m = assembleProjectedM(t, 1.1, 0.6);
  const LinearOperator op = projectedOperator(t, 1.1, 0.6);
  const Vector x = gaussian(6, 3);
  Vector y(6), yt(6);
  op.apply(x, y);
  op.applyTranspose(x, yt);
  const Vector ref = m.multiply(x);
  const Vector reft = m.transposeMultiply(x);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_NEAR(y[i], ref[i], 1e-15);
    EXPECT_NEAR(yt[i], reft[i], 1e-15);
  }
}

TEST(AugmentedOperator, TransposeIsAdjoint) {
  const std::size_t n = 20;
  const auto a = SymmetricLinearOperator::fromDiagonal(gaussian(n, 4));
  const AugmentedOperator m(a, gaussian(n, 5), 1.3);
  const Vector x = gaussian(2 * n, 6), y = gaussian(2 * n, 7);
  Vector mx(2 * n), mty(2 * n);
  m.apply(x, mx);
  m.applyTranspose(y, mty);
  EXPECT_NEAR(dot(mx, y), dot(x, mty), 1e-12);
}

TEST(EigpairFromTrs, OneByOneHandExample) {
  // A=[1], g=[2], delta=1: lambda=1, M=[[-1,4],[1,-1]], rightmost eigenvalue 1
  const auto sol = solveTrsTridiagonal({{1}, {}}, 2.0, 1.0);
  ASSERT_NEAR(sol.lambda, 1.0, 1e-13);
  const auto p = eigpairFromTrs({{1}, {}}, sol.lambda, sol.h, 2.0, 1.0);
  const double r5 = std::sqrt(5.0);
  EXPECT_NEAR(std::abs(p.z1[0]), 2 / r5, 1e-13);
  EXPECT_NEAR(std::abs(p.z2[0]), 1 / r5, 1e-13);
  EXPECT_GT(p.z1[0] * p.z2[0], 0.0);
  EXPECT_LE(p.residual, 1e-13);
  const Vector s = recoverSolution(p.z1, p.z2, Vector{2}, 1.0);
  EXPECT_NEAR(s[0], -1.0, 1e-13);
  EXPECT_NEAR(spectralCondition({{1}, {}}, 1.0, Vector{2 / r5}), 1.25, 1e-13);
}

TEST(EigpairFromTrs, ScalarBoundary) {
  const auto p = eigpairFromTrs({{2}, {}}, 2.0, Vector{-1}, 4.0, 1.0);
  EXPECT_NEAR(p.z2[0], p.z1[0] / 4.0, 1e-15);
  const DenseMatrix m = assembleProjectedM({{2}, {}}, 4.0, 1.0);
  Vector z{p.z1[0], p.z2[0]};
  Vector mz = m.multiply(z);
  EXPECT_NEAR(mz[0], 2 * z[0], 1e-14);
  EXPECT_NEAR(mz[1], 2 * z[1], 1e-14);
}

TEST(EigpairFromTrs, ScalingInvariance) {
  const SymmetricTridiagonal t{{-1, 0.4, 2}, {0.9, 0.5}};
  const auto sol = solveTrsTridiagonal(t, 1.2, 0.8);
  const auto p1 = eigpairFromTrs(t, sol.lambda, sol.h, 1.2, 0.8);
  Vector h2 = sol.h;
  scale(3.7, h2);
  const auto p2 = eigpairFromTrs(t, sol.lambda, h2, 1.2, 0.8);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(p1.z1[i], p2.z1[i], 1e-14);
    EXPECT_NEAR(p1.z2[i], p2.z2[i], 1e-14);
  }
}

TEST(EigpairFromTrs, IsRightmostEigenvalueOfProjectedM) {
  const SymmetricTridiagonal t{{-1, 0.4, 2, -0.6, 1.1}, {0.9, 0.5, 0.3, 1.2}};
  const auto sol = solveTrsTridiagonal(t, 1.2, 0.8);
  Eigen::EigenSolver<Eigen::MatrixXd> es(toEigen(assembleProjectedM(t, 1.2, 0.8)));
  double rightmost = -1e300;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    rightmost = std::max(rightmost, es.eigenvalues()(i).real());
  EXPECT_NEAR(sol.lambda, rightmost, 1e-10);
}

TEST(EigpairFromTrs, WrongMultiplierFailsVerification) {
  const SymmetricTridiagonal t{{-1, 0.4, 2}, {0.9, 0.5}};
  const auto sol = solveTrsTridiagonal(t, 1.2, 0.8);
  EXPECT_THROW(eigpairFromTrs(t, sol.lambda + 0.05, sol.h, 1.2, 0.8), VerificationFailed);
}

TEST(RecoverSolution, HomogeneousAndHardCase) {
  const Vector y1{0.3, -0.4}, y2{0.2, 0.5}, g{1.0, 2.0};
  const Vector s1 = recoverSolution(y1, y2, g, 0.9);
  Vector y1c = y1, y2c = y2;
  scale(-2.5, y1c);
  scale(-2.5, y2c);
  const Vector s2 = recoverSolution(y1c, y2c, g, 0.9);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_NEAR(s1[i], s2[i], 1e-15);
  EXPECT_THROW(recoverSolution(y1, Vector{2.0, -1.0}, g, 0.9), HardCaseSignal);
}

TEST(Separation, DiagonalExamples) {
  DenseMatrix m(2, 2);
  m(0, 0) = 1;
  m(1, 1) = 3;
  EXPECT_NEAR(separation(m, Vector{1, 0}, 1.0), 2.0, 1e-12);
  DenseMatrix m3(3, 3);
  m3(0, 0) = 5;
  m3(1, 1) = 1;
  EXPECT_NEAR(separation(m3, Vector{1, 0, 0}, 5.0), 4.0, 1e-12);
}

TEST(Separation, RandomSchurFormAgainstSvd) {
  // M = U [[mu, b'],[0, C]] U' with U orthogonal; sep = sigma_min(C - mu I)
  const std::size_t n = 10;
  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
  const double mu = 2.5;
  S(0, 0) = mu;
  for (std::size_t j = 1; j < n; ++j) S(0, j) = gauss(rng);
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 1; j < n; ++j) S(i, j) = gauss(rng);
  Eigen::MatrixXd G(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) G(i, j) = gauss(rng);
  const Eigen::MatrixXd U = Eigen::HouseholderQR<Eigen::MatrixXd>(G).householderQ();
  const Eigen::MatrixXd M = U * S * U.transpose();
  Eigen::MatrixXd C = S.bottomRightCorner(n - 1, n - 1) - mu * Eigen::MatrixXd::Identity(n - 1, n - 1);
  const double expect = Eigen::JacobiSVD<Eigen::MatrixXd>(C).singularValues()(n - 2);
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = M(i, j);
  Vector z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = U(i, 0);
  EXPECT_NEAR(separation(m, z, mu), expect, 1e-9 * (1 + expect));
}

TEST(SubspaceSine, Examples) {
  DenseMatrix q(2, 1);
  q(0, 0) = 1;
  EXPECT_NEAR(subspaceSine(Vector{0, 1}, Vector{0, 0}, q), 1.0, 1e-15);
  EXPECT_NEAR(subspaceSine(Vector{0.6, 0}, Vector{0.8, 0}, q), 0.0, 1e-15);
  DenseMatrix q3(3, 2);
  q3(0, 0) = 1;
  q3(1, 1) = 1;
  EXPECT_NEAR(subspaceSine(Vector{0, 0, 0.6}, Vector{0, 0, 0.8}, q3), 1.0, 1e-15);
}

TEST(GammaTilde, FullSpaceAndDiagonalCases) {
  const std::size_t n = 6;
  const auto a = SymmetricLinearOperator::fromDiagonal(Vector{1, 2, 3, 4, 5, 6});
  const Vector g = gaussian(n, 9);
  const AugmentedOperator m(a, g, 1.0);
  EXPECT_LE(gammaTilde(m, DenseMatrix::identity(n)), 1e-12);

  // rank-one block vanishes when g lies in the leading coordinate block
  const Vector ge{1, 0.5, 0, 0, 0, 0};
  const AugmentedOperator md(a, ge, 1.0);
  DenseMatrix q(n, 2);
  q(0, 0) = 1;
  q(1, 1) = 1;
  EXPECT_LE(gammaTilde(md, q), 1e-12);
}

TEST(GammaTilde, BoundedByNormM) {
  const std::size_t n = 100;
  const auto a = SymmetricLinearOperator::fromDiagonal(gaussian(n, 10));
  const Vector g = gaussian(n, 11);
  const AugmentedOperator m(a, g, 1.0);
  const auto f = lanczosRun(a, g, 8);
  const double gam = gammaTilde(m, f.Q);
  const double normM = operatorNorm2(m.asLinearOperator(), 1e-10, 5000).value;
  EXPECT_GT(gam, 0.0);
  EXPECT_LE(gam, normM * (1 + 1e-6));
}

TEST(SolutionSine, Examples) {
  EXPECT_NEAR(solutionSine(Vector{2, 4}, Vector{1, 2}).sine, 0.0, 1e-15);
  EXPECT_NEAR(solutionSine(Vector{1, 0}, Vector{0, 3}).sine, 1.0, 1e-15);
}

TEST(SolutionSine, SmallAngleMatchesRelativeError) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 50; ++trial) {
    Vector s = gaussian(8, 100 + trial);
    scale(1 / norm2(s), s);
    Vector p = gaussian(8, 200 + trial);
    axpy(-dot(p, s), s, p);
    scale(1e-4 / norm2(p), p);
    Vector sk = s;
    axpy(1.0, p, sk);
    scale(1 / norm2(sk), sk);
    const auto r = solutionSine(sk, s);
    EXPECT_LE(std::abs(r.relError - r.sine), 1e-6);
  }
}

TEST(ReferenceEigenpair, DiagonalAndCgPathsAgree) {
  const std::size_t n = 40;
  Vector d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = -1.0 + 0.1 * double(i);
  const auto diag = SymmetricLinearOperator::fromDiagonal(d);
  const SymmetricLinearOperator free(n, [d](std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < d.size(); ++i) y[i] = d[i] * x[i];
  });
  const Vector g = gaussian(n, 12);
  const auto sol = solveTrsDiagonal(d, g, 1.0);
  const auto e1 = referenceEigenpair(diag, sol.lambda, sol.h);
  const auto e2 = referenceEigenpair(free, sol.lambda, sol.h);
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_NEAR(e1.y1[i], e2.y1[i], 1e-10);
    EXPECT_NEAR(e1.y2[i], e2.y2[i], 1e-10);
  }
  EXPECT_NEAR(e1.y1Norm, e2.y1Norm, 1e-12);
  EXPECT_NEAR(dot(e1.y1, e1.y1) + dot(e1.y2, e1.y2), 1.0, 1e-13);
}
