#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "trslab/errors.hpp"
#include "trslab/linalg.hpp"

using namespace trslab;

namespace {

SymmetricTridiagonal tri(Vector d, Vector e) { return {std::move(d), std::move(e)}; }

DenseSymmetric randomSymmetric(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  DenseSymmetric a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) a.set(i, j, gauss(rng));
  return a;
}

Eigen::MatrixXd toEigen(const DenseMatrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

}  // namespace

TEST(Ldl, TwoByTwoPivots) {
  const auto f = ldlShifted(tri({2, 2}, {1}), 0.0);
  ASSERT_TRUE(f.ok());
  EXPECT_DOUBLE_EQ(f.d[0], 2.0);
  EXPECT_DOUBLE_EQ(f.d[1], 1.5);
  EXPECT_DOUBLE_EQ(f.l[0], 0.5);
}

TEST(Ldl, ScalarShift) {
  const auto f = ldlShifted(tri({2}, {}), 1.0);
  ASSERT_TRUE(f.ok());
  EXPECT_DOUBLE_EQ(f.d[0], 3.0);
}

TEST(Ldl, ZeroPivotIsIndefinite) {
  const auto f = ldlShifted(tri({0, 0}, {1}), 0.0);
  ASSERT_FALSE(f.ok());
  EXPECT_EQ(*f.failedPivot, 0u);
  try {
    solveShifted(tri({0, 0}, {1}), 0.0, Vector{1, 1});
    FAIL() << "expected IndefiniteShift";
  } catch (const IndefiniteShift& e) {
    EXPECT_EQ(e.pivot(), 0u);
  }
}

TEST(SolveShifted, HandExamples) {
  EXPECT_DOUBLE_EQ(solveShifted(tri({2}, {}), 1.0, Vector{3})[0], 1.0);
  const Vector h = solveShifted(tri({1, 2}, {0}), 0.0, Vector{1, 1});
  EXPECT_DOUBLE_EQ(h[0], 1.0);
  EXPECT_DOUBLE_EQ(h[1], 0.5);
  const Vector h2 = solveShifted(tri({2, 2}, {1}), 0.0, Vector{1, 0});
  EXPECT_NEAR(h2[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(h2[1], -1.0 / 3.0, 1e-15);
}

TEST(SolveShifted, RandomAgainstDenseSolve) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 1 + trial;
    SymmetricTridiagonal t;
    for (std::size_t i = 0; i < m; ++i) t.diag.push_back(gauss(rng));
    for (std::size_t i = 1; i < m; ++i) t.offdiag.push_back(gauss(rng));
    const double shift = -extremalEigTridiagonal(t).min + 0.5;
    Vector rhs(m);
    for (auto& v : rhs) v = gauss(rng);
    const Vector h = solveShifted(t, shift, rhs);
    Eigen::MatrixXd a = toEigen(t.toDense()) + shift * Eigen::MatrixXd::Identity(m, m);
    const Eigen::VectorXd x = a.ldlt().solve(Eigen::Map<const Eigen::VectorXd>(rhs.data(), m));
    for (std::size_t i = 0; i < m; ++i) EXPECT_NEAR(h[i], x[i], 1e-10 * (1 + std::abs(x[i])));
  }
}

TEST(Tridiagonal, ValidateRejectsBadShapes) {
  EXPECT_THROW(tri({1, 2}, {}).validate(), std::invalid_argument);
  EXPECT_THROW(tri({1, NAN}, {1}).validate(), std::invalid_argument);
  EXPECT_NO_THROW(tri({1, 2}, {3}).validate());
}

TEST(ExtremalEig, HandExamples) {
  auto r = extremalEigTridiagonal(tri({2, 2}, {1}));
  EXPECT_NEAR(r.min, 1.0, 1e-12);
  EXPECT_NEAR(r.max, 3.0, 1e-12);
  r = extremalEigTridiagonal(tri({5}, {}));
  EXPECT_NEAR(r.min, 5.0, 1e-12);
  EXPECT_NEAR(r.max, 5.0, 1e-12);
  r = extremalEigTridiagonal(tri({-2, 0, 2}, {0, 0}));
  EXPECT_NEAR(r.min, -2.0, 1e-12);
  EXPECT_NEAR(r.max, 2.0, 1e-12);
}

TEST(ExtremalEig, MatchesEigenOnRandomTridiagonals) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t m = 2 + trial;
    SymmetricTridiagonal t;
    for (std::size_t i = 0; i < m; ++i) t.diag.push_back(gauss(rng));
    for (std::size_t i = 1; i < m; ++i) t.offdiag.push_back(gauss(rng));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(toEigen(t.toDense()));
    const auto r = extremalEigTridiagonal(t);
    EXPECT_NEAR(r.min, es.eigenvalues()(0), 1e-11);
    EXPECT_NEAR(r.max, es.eigenvalues()(m - 1), 1e-11);
    EXPECT_EQ(sturmCount(t, es.eigenvalues()(0) - 1e-8), 0u);
    EXPECT_EQ(sturmCount(t, es.eigenvalues()(m - 1) + 1e-8), m);
  }
}

TEST(SymmetricEigDense, HandExamples) {
  DenseSymmetric a(2);
  a.set(0, 0, 3);
  a.set(1, 1, 1);
  auto e = symmetricEigDense(a);
  EXPECT_NEAR(e.values[0], 1.0, 1e-14);
  EXPECT_NEAR(e.values[1], 3.0, 1e-14);

  DenseSymmetric b(2);
  b.set(1, 0, 1);
  e = symmetricEigDense(b);
  EXPECT_NEAR(e.values[0], -1.0, 1e-14);
  EXPECT_NEAR(e.values[1], 1.0, 1e-14);

  DenseSymmetric c(2);
  c.set(0, 0, 2);
  c.set(1, 1, 2);
  c.set(1, 0, 1);
  e = symmetricEigDense(c);
  EXPECT_NEAR(e.values[0], 1.0, 1e-14);
  EXPECT_NEAR(e.values[1], 3.0, 1e-14);
  EXPECT_NEAR(std::abs(e.vectors(0, 0)), 1 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(e.vectors(0, 0), -e.vectors(1, 0), 1e-14);
  EXPECT_NEAR(e.vectors(0, 1), e.vectors(1, 1), 1e-14);
}

TEST(SymmetricEigDense, ResidualAndOrthogonality) {
  const std::size_t n = 40;
  const DenseSymmetric a = randomSymmetric(n, 5);
  const auto e = symmetricEigDense(a);
  const Eigen::MatrixXd A = toEigen(a.toDense());
  const Eigen::MatrixXd V = toEigen(e.vectors);
  const Eigen::MatrixXd L = Eigen::Map<const Eigen::VectorXd>(e.values.data(), n).asDiagonal();
  const double normA = A.norm();
  EXPECT_LE((A * V - V * L).norm(), 1e-12 * normA);
  EXPECT_LE((V.transpose() * V - Eigen::MatrixXd::Identity(n, n)).norm(), 1e-12);
  for (std::size_t i = 1; i < n; ++i) EXPECT_LE(e.values[i - 1], e.values[i]);
}

TEST(Householder, PreservesSpectrum) {
  const DenseSymmetric a = randomSymmetric(30, 9);
  const SymmetricTridiagonal t = householderTridiagonalize(a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ea(toEigen(a.toDense()));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> et(toEigen(t.toDense()));
  EXPECT_LE((ea.eigenvalues() - et.eigenvalues()).norm(), 1e-11);
}

TEST(OperatorNorm, HandExamples) {
  DenseMatrix d(2, 2);
  d(0, 0) = 2;
  d(1, 1) = -5;
  EXPECT_NEAR(operatorNorm2(LinearOperator::fromDense(d)).value, 5.0, 1e-7);
  EXPECT_NEAR(operatorNorm2(LinearOperator::fromDense(DenseMatrix::identity(7))).value, 1.0, 1e-12);
  DenseMatrix nil(2, 2);
  nil(0, 1) = 2;
  EXPECT_NEAR(operatorNorm2(LinearOperator::fromDense(nil)).value, 2.0, 1e-7);
}

TEST(OperatorNorm, NonsymmetricAgainstSvd) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> gauss;
  DenseMatrix m(15, 15);
  for (std::size_t i = 0; i < 15; ++i)
    for (std::size_t j = 0; j < 15; ++j) m(i, j) = gauss(rng);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(toEigen(m));
  const auto est = operatorNorm2(LinearOperator::fromDense(m), 1e-12, 20000);
  EXPECT_NEAR(est.value, svd.singularValues()(0), 1e-6 * svd.singularValues()(0));
}

TEST(OrthonormalComplement, Examples) {
  DenseMatrix c = orthonormalComplement(Vector{1, 0});
  ASSERT_EQ(c.cols(), 1u);
  EXPECT_NEAR(std::abs(c(1, 0)), 1.0, 1e-15);
  EXPECT_NEAR(c(0, 0), 0.0, 1e-15);

  const double r = 1 / std::sqrt(2.0);
  c = orthonormalComplement(Vector{r, r});
  EXPECT_NEAR(std::abs(c(0, 0)), r, 1e-15);
  EXPECT_NEAR(c(0, 0), -c(1, 0), 1e-15);

  EXPECT_THROW(orthonormalComplement(Vector{0, 0, 0}), ZeroVector);
}

TEST(OrthonormalComplement, DefiningProperty) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> gauss;
  for (std::size_t m : {2u, 5u, 17u}) {
    Vector v(m);
    for (auto& x : v) x = gauss(rng);
    scale(1 / norm2(v), v);
    const DenseMatrix z = orthonormalComplement(v);
    const Eigen::MatrixXd Z = toEigen(z);
    EXPECT_LE((Z.transpose() * Z - Eigen::MatrixXd::Identity(m - 1, m - 1)).norm(), 1e-14);
    EXPECT_LE((Z.transpose() * Eigen::Map<const Eigen::VectorXd>(v.data(), m)).norm(), 1e-14);
  }
}

TEST(SymmetricOperator, StorageFormsAgree) {
  const std::size_t n = 12;
  const DenseSymmetric d = randomSymmetric(n, 8);
  std::vector<Triplet> trip;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) trip.push_back({i, j, d(i, j)});
  const auto fromDense = SymmetricLinearOperator::fromDense(d);
  const auto fromTrip = SymmetricLinearOperator::fromTriplets(n, trip);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> gauss;
  Vector x(n);
  for (auto& v : x) v = gauss(rng);
  const Vector y1 = fromDense.apply(x);
  const Vector y2 = fromTrip.apply(x);
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y1[i], y2[i], 1e-13);
  EXPECT_LE(symmetryDefect(fromTrip, 5, 2), 1e-14);
  EXPECT_NE(fromDense.dense(), nullptr);
  EXPECT_NE(fromTrip.sparse(), nullptr);
}

TEST(SymmetricOperator, TripletDuplicatesAreSummed) {
  const std::vector<Triplet> trip{{0, 0, 1}, {0, 0, 2}, {1, 0, 4}};
  const auto a = SymmetricLinearOperator::fromTriplets(2, trip);
  const Vector y = a.apply(Vector{1, 1});
  EXPECT_DOUBLE_EQ(y[0], 7.0);
  EXPECT_DOUBLE_EQ(y[1], 4.0);
}

TEST(ConjugateGradient, SolvesShiftedDiagonal) {
  const auto a = SymmetricLinearOperator::fromDiagonal(Vector{-1, 0, 2, 5});
  const Vector b{1, 2, 3, 4};
  const auto r = conjugateGradient(a, 1.5, b, 1e-14);
  ASSERT_TRUE(r.converged);
  const Vector d{-1, 0, 2, 5};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(r.x[i], b[i] / (d[i] + 1.5), 1e-12);
}

TEST(VectorKernels, NormAvoidsOverflow) {
  EXPECT_NEAR(norm2(Vector{3e200, 4e200}), 5e200, 1e186);
  EXPECT_DOUBLE_EQ(norm2(Vector{0, 0}), 0.0);
  EXPECT_DOUBLE_EQ(dot(Vector{1, 2}, Vector{3, 4}), 11.0);
}
