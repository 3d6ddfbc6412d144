#pragma once

#include <optional>
#include <string_view>

#include "trslab/linalg.hpp"

namespace trslab {

enum class CaseTag { Boundary, Interior, NearHard };

std::string_view caseName(CaseTag c);

/// Residuals of the optimality conditions for a candidate (lambda, s).
struct KktReport {
  double feasibilityGap = 0.0;   // delta - ||s||
  double stationarity = 0.0;     // ||(A + lambda I) s + g||
  double complementarity = 0.0;  // lambda (delta - ||s||)
  double curvatureMargin = 0.0;  // theta_min(A) + lambda
  bool pass = false;
};

struct TrsSolution {
  double lambda = 0.0;
  Vector h;
  CaseTag caseTag = CaseTag::Boundary;
  int secularIterations = 0;
  std::optional<KktReport> kkt;
};

struct SecularOptions {
  double tol = 1e-13;  // relative boundary residual | ||h|| - delta | / delta
  int maxIterations = 200;
  /// Known lower estimate of the multiplier; used as the starting point.
  std::optional<double> lambdaLower;
};

/// min beta0 e1'h + h'Th/2 subject to ||h|| <= delta, by safeguarded Newton on
/// 1/||h(lambda)|| - 1/delta. Throws NearHardCase, NoConvergence.
TrsSolution solveTrsTridiagonal(const SymmetricTridiagonal& t, double beta0, double delta,
                                const SecularOptions& opts = {});

/// Dense reference solver through a full eigendecomposition and bisection on
/// the explicit secular function. Throws NearHardCase, NoConvergence and
/// std::invalid_argument above `orderCap`.
TrsSolution solveTrsDense(const DenseSymmetric& a, std::span<const double> g, double delta,
                          const SecularOptions& opts = {}, std::size_t orderCap = 500);

/// Same as solveTrsDense for A = diag(d); no size cap.
TrsSolution solveTrsDiagonal(std::span<const double> d, std::span<const double> g, double delta,
                             const SecularOptions& opts = {});

/// Solves min g's + s'As/2, ||s|| <= delta, given A = V diag(theta) V' through
/// the coefficients c = V'g. Returns the solution in eigen-coordinates.
TrsSolution solveTrsEigenbasis(std::span<const double> theta, std::span<const double> c,
                               double delta, const SecularOptions& opts = {});

/// Evaluates the optimality residuals. `thetaMin` may be supplied when the
/// smallest eigenvalue of A is already known; otherwise it is estimated with
/// spectralRange. pass requires every violation to be within tol (relative to
/// delta for norms of s, to 1 + ||g|| for the stationarity residual).
KktReport checkKkt(const SymmetricLinearOperator& a, std::span<const double> g, double delta,
                   double lambda, std::span<const double> s, double tol,
                   std::optional<double> thetaMin = std::nullopt);

}  // namespace trslab
