#pragma once

#include <cstddef>
#include <cstdint>

#include "trslab/linalg.hpp"

namespace trslab {

/// A Q_k = Q_k T_k + betaNext * next * e_{k+1}'  with  Q_k' g = beta0 e_1.
struct LanczosFactorization {
  DenseMatrix Q;  // n x (k+1)
  SymmetricTridiagonal T;
  double beta0 = 0.0;
  double betaNext = 0.0;
  Vector next;  // q_{k+1}; empty once broken down
  bool brokenDown = false;
  double normEstimate = 0.0;  // running max of |delta_j| + beta_j + beta_{j+1}

  /// Index k of the last completed step (T has order k+1).
  std::size_t steps() const noexcept { return T.order() - 1; }
};

/// Runs min(kMax, breakdown) steps after the initial one.
/// Throws ZeroStartVector if g == 0.
LanczosFactorization lanczosRun(const SymmetricLinearOperator& a, std::span<const double> g,
                                std::size_t kMax, double breakdownTol = 1e-12);

/// Returns a copy grown by `steps`; identical to a longer lanczosRun.
/// Throws AlreadyBrokenDown when steps > 0 and f has broken down.
LanczosFactorization extendLanczos(const LanczosFactorization& f, const SymmetricLinearOperator& a,
                                   std::size_t steps, double breakdownTol = 1e-12);

/// In-place variant of extendLanczos used by the GLTR loop.
void advanceLanczos(LanczosFactorization& f, const SymmetricLinearOperator& a, std::size_t steps,
                    double breakdownTol = 1e-12);

/// Extremal eigenvalue estimates of A. Exact for diagonal storage, Householder
/// plus Sturm bisection for dense storage, Ritz values of a fully
/// reorthogonalized Lanczos run (from a seeded random start) otherwise.
EigenRange spectralRange(const SymmetricLinearOperator& a, double tol = 1e-12,
                         std::size_t maxSteps = 400, std::uint64_t seed = 0x1a2c05);

}  // namespace trslab
