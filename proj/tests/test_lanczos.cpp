#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "trslab/errors.hpp"
#include "trslab/lanczos.hpp"

using namespace trslab;

namespace {

Vector randomVector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Vector v(n);
  for (auto& x : v) x = gauss(rng);
  return v;
}

SymmetricLinearOperator randomDiagonal(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  Vector d(n);
  for (auto& x : d) x = u(rng);
  return SymmetricLinearOperator::fromDiagonal(d);
}

}  // namespace

TEST(Lanczos, IdentityBreaksDownImmediately) {
  const auto a = SymmetricLinearOperator::fromDiagonal(Vector(5, 1.0));
  const auto f = lanczosRun(a, randomVector(5, 1), 10);
  EXPECT_TRUE(f.brokenDown);
  EXPECT_EQ(f.steps(), 0u);
  EXPECT_NEAR(f.T.diag[0], 1.0, 1e-15);
  EXPECT_NEAR(f.betaNext, 0.0, 1e-15);
}

TEST(Lanczos, EigenvectorStartBreaksDown) {
  const auto a = SymmetricLinearOperator::fromDiagonal(Vector{1, 2, 3});
  const auto f = lanczosRun(a, Vector{1, 0, 0}, 10);
  EXPECT_TRUE(f.brokenDown);
  EXPECT_EQ(f.steps(), 0u);
  EXPECT_DOUBLE_EQ(f.T.diag[0], 1.0);
}

TEST(Lanczos, TwoByTwoHandRecurrence) {
  const auto a = SymmetricLinearOperator::fromDiagonal(Vector{1, 2});
  const double r = 1 / std::sqrt(2.0);
  const auto f = lanczosRun(a, Vector{r, r}, 10);
  EXPECT_TRUE(f.brokenDown);
  ASSERT_EQ(f.steps(), 1u);
  EXPECT_NEAR(f.T.diag[0], 1.5, 1e-15);
  EXPECT_NEAR(f.T.offdiag[0], 0.5, 1e-15);
  EXPECT_NEAR(f.T.diag[1], 1.5, 1e-15);
  EXPECT_NEAR(f.beta0, 1.0, 1e-15);
}

TEST(Lanczos, ZeroStartThrows) {
  const auto a = SymmetricLinearOperator::fromDiagonal(Vector{1, 2});
  EXPECT_THROW(lanczosRun(a, Vector{0, 0}, 3), ZeroStartVector);
}

TEST(Lanczos, FactorizationRelationAndOrthogonality) {
  const std::size_t n = 300, k = 40;
  const auto a = randomDiagonal(n, 2);
  const Vector g = randomVector(n, 3);
  const auto f = lanczosRun(a, g, k);
  ASSERT_EQ(f.steps(), k);
  const std::size_t m = k + 1;
  Eigen::MatrixXd Q(n, m), AQ(n, m);
  for (std::size_t j = 0; j < m; ++j) {
    const auto c = f.Q.col(j);
    const Vector ac = a.apply(c);
    for (std::size_t i = 0; i < n; ++i) {
      Q(i, j) = c[i];
      AQ(i, j) = ac[i];
    }
  }
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t i = 0; i < m; ++i) T(i, i) = f.T.diag[i];
  for (std::size_t i = 0; i + 1 < m; ++i) T(i + 1, i) = T(i, i + 1) = f.T.offdiag[i];
  Eigen::MatrixXd R = AQ - Q * T;
  for (std::size_t i = 0; i < n; ++i) R(i, m - 1) -= f.betaNext * f.next[i];
  EXPECT_LE(R.norm(), 1e-12 * f.normEstimate * std::sqrt(double(m)));
  EXPECT_LE((Q.transpose() * Q - Eigen::MatrixXd::Identity(m, m)).norm(), 1e-13);
  // Q'g = beta0 e1
  const Eigen::VectorXd qg = Q.transpose() * Eigen::Map<const Eigen::VectorXd>(g.data(), n);
  EXPECT_NEAR(qg(0), f.beta0, 1e-12);
  EXPECT_LE(qg.tail(m - 1).norm(), 1e-12);
}

TEST(Lanczos, ExtendMatchesLongerRun) {
  const auto a = randomDiagonal(200, 5);
  const Vector g = randomVector(200, 6);
  const auto full = lanczosRun(a, g, 5);
  const auto part = extendLanczos(lanczosRun(a, g, 2), a, 3);
  ASSERT_EQ(part.steps(), full.steps());
  for (std::size_t i = 0; i < full.T.order(); ++i) EXPECT_EQ(part.T.diag[i], full.T.diag[i]);
  for (std::size_t i = 0; i + 1 < full.T.order(); ++i) EXPECT_EQ(part.T.offdiag[i], full.T.offdiag[i]);
  EXPECT_EQ(part.Q.data(), full.Q.data());
}

TEST(Lanczos, ExtendByZeroIsIdentity) {
  const auto a = randomDiagonal(50, 7);
  const auto f = lanczosRun(a, randomVector(50, 8), 4);
  const auto e = extendLanczos(f, a, 0);
  EXPECT_EQ(e.T.diag, f.T.diag);
  EXPECT_EQ(e.Q.data(), f.Q.data());
}

TEST(Lanczos, ExtendPastBreakdownThrows) {
  const auto a = SymmetricLinearOperator::fromDiagonal(Vector{1, 2});
  const double r = 1 / std::sqrt(2.0);
  const auto f = lanczosRun(a, Vector{r, r}, 10);
  ASSERT_TRUE(f.brokenDown);
  EXPECT_THROW(extendLanczos(f, a, 1), AlreadyBrokenDown);
  EXPECT_NO_THROW(extendLanczos(f, a, 0));
}

TEST(Lanczos, BreaksDownAtInvariantSubspaceDimension) {
  // g touches only 4 distinct eigenvalues
  Vector d{1, 1, 2, 2, 3, 4, 4};
  const auto a = SymmetricLinearOperator::fromDiagonal(d);
  const auto f = lanczosRun(a, Vector(7, 1.0), 20);
  EXPECT_TRUE(f.brokenDown);
  EXPECT_EQ(f.steps(), 3u);
}

TEST(SpectralRange, ExactForDiagonalAndDense) {
  const auto a = SymmetricLinearOperator::fromDiagonal(Vector{3, -1, 7, 2});
  const auto r = spectralRange(a);
  EXPECT_EQ(r.min, -1.0);
  EXPECT_EQ(r.max, 7.0);

  DenseSymmetric d(3);
  d.set(0, 0, 2);
  d.set(1, 1, 2);
  d.set(2, 2, 5);
  d.set(1, 0, 1);
  const auto rd = spectralRange(SymmetricLinearOperator::fromDense(d));
  EXPECT_NEAR(rd.min, 1.0, 1e-12);
  EXPECT_NEAR(rd.max, 5.0, 1e-12);
}

TEST(SpectralRange, MatrixFreeOperator) {
  Vector d(400);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = -2.0 + 4.0 * double(i) / 399.0;
  const SymmetricLinearOperator a(400, [d](std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < d.size(); ++i) y[i] = d[i] * x[i];
  });
  const auto r = spectralRange(a, 1e-12, 400);
  EXPECT_NEAR(r.min, -2.0, 1e-9);
  EXPECT_NEAR(r.max, 2.0, 1e-9);
}
