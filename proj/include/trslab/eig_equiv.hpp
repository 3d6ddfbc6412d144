#pragma once

#include "trslab/linalg.hpp"

namespace trslab {

/// The 2n x 2n matrix [[-A, g g'/delta^2], [I, -A]] applied matrix-free.
class AugmentedOperator {
 public:
  AugmentedOperator(SymmetricLinearOperator a, Vector g, double delta);

  std::size_t dimension() const noexcept { return 2 * n_; }
  /// (u; v) -> (-Au + g (g'v)/delta^2; u - Av)
  void apply(std::span<const double> x, std::span<double> y) const;
  /// (u; v) -> (-Au + v; g (g'u)/delta^2 - Av)
  void applyTranspose(std::span<const double> x, std::span<double> y) const;
  LinearOperator asLinearOperator() const;
  /// Dense assembly for small n (testing).
  DenseMatrix assembleDense() const;

 private:
  std::size_t n_;
  SymmetricLinearOperator a_;
  Vector g_;
  double delta_;
};

/// [[-T, beta0^2 e1 e1'/delta^2], [I, -T]] of order 2m.
DenseMatrix assembleProjectedM(const SymmetricTridiagonal& t, double beta0, double delta);

/// Matrix-free form of assembleProjectedM (O(m) per product).
LinearOperator projectedOperator(const SymmetricTridiagonal& t, double beta0, double delta);

struct AugmentedEigenpair {
  double mu = 0.0;
  Vector z1;
  Vector z2;
  double residual = 0.0;  // ||M z - mu z||
  double normM = 0.0;     // ||M||_2 estimate used to scale the check
};

/// Rightmost eigenpair of the projected matrix built from a boundary solution
/// (lambda, h) of the reduced problem: z1 ~ h, z2 = (T + lambda I)^{-1} z1.
/// Throws VerificationFailed when ||M z - lambda z|| > tol ||M||.
AugmentedEigenpair eigpairFromTrs(const SymmetricTridiagonal& t, double lambda,
                                  std::span<const double> h, double beta0, double delta,
                                  double tol = 1e-10);

/// s = -(delta^2 / g'y2) y1. Throws HardCaseSignal when g'y2 vanishes.
Vector recoverSolution(std::span<const double> y1, std::span<const double> y2,
                       std::span<const double> g, double delta);

/// 1 / (2 z1'(T + lambda I)^{-1} z1) for a unit pair (z1; z2). Throws IndefiniteShift.
double spectralCondition(const SymmetricTridiagonal& t, double lambda, std::span<const double> z1);
/// 1 / (2 |y1'y2|) for a unit eigenvector (y1; y2).
double spectralConditionPair(std::span<const double> y1, std::span<const double> y2);

/// sigma_min(C - mu I) with C = Z' M Z and Z an orthonormal basis of z's complement.
double separation(const DenseMatrix& m, std::span<const double> z, double mu);

/// sqrt(||(I - QQ')y1||^2 + ||(I - QQ')y2||^2) using the first `cols` columns of Q
/// (all of them when cols == 0).
double subspaceSine(std::span<const double> y1, std::span<const double> y2, const DenseMatrix& q,
                    std::size_t cols = 0);

/// ||P M (I - P)|| with P = diag(QQ', QQ'), by power iteration.
double gammaTilde(const AugmentedOperator& m, const DenseMatrix& q, std::size_t cols = 0);

struct SolutionAngle {
  double sine = 0.0;
  double relError = 0.0;  // ||s_k - s_opt|| / ||s_opt||
};

SolutionAngle solutionSine(std::span<const double> sk, std::span<const double> sOpt);

/// Unit eigenvector (y1; y2) of M for the easy-case solution (lambda, s):
/// y1 ~ s, y2 = (A + lambda I)^{-1} y1 (exact for diagonal storage, CG otherwise).
struct ReferenceEigenpair {
  Vector y1;
  Vector y2;
  double y1Norm = 0.0;
  double solveResidual = 0.0;
};

ReferenceEigenpair referenceEigenpair(const SymmetricLinearOperator& a, double lambda,
                                      std::span<const double> s);

}  // namespace trslab
