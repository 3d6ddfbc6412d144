#include "trslab/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "trslab/errors.hpp"

namespace trslab {
namespace {

// One Lanczos step on column j = current order of T (q_j stored in f.next).
void step(LanczosFactorization& f, const SymmetricLinearOperator& a, double breakdownTol) {
  const std::size_t n = a.dimension();
  const bool first = f.Q.cols() == 0;
  f.Q.appendColumn(f.next);
  const std::size_t j = f.Q.cols() - 1;
  const auto qj = f.Q.col(j);

  Vector w(n);
  a.apply(qj, w);
  const double betaPrev = first ? 0.0 : f.betaNext;
  if (!first) axpy(-betaPrev, f.Q.col(j - 1), w);
  double delta = dot(qj, w);
  axpy(-delta, qj, w);

  // two passes of classical Gram-Schmidt against every stored column
  for (int pass = 0; pass < 2; ++pass) {
    const Vector c = f.Q.transposeMultiply(w);
    for (std::size_t i = 0; i <= j; ++i) axpy(-c[i], f.Q.col(i), w);
    delta += c[j];
  }

  if (first) {
    f.T.diag.assign(1, delta);
    f.T.offdiag.clear();
  } else {
    f.T.diag.push_back(delta);
    f.T.offdiag.push_back(betaPrev);
  }

  const double beta = norm2(w);
  f.normEstimate = std::max(f.normEstimate, std::abs(delta) + betaPrev + beta);
  f.betaNext = beta;
  if (beta <= breakdownTol * f.normEstimate) {
    f.brokenDown = true;
    f.next.clear();
    return;
  }
  scale(1.0 / beta, w);
  f.next = std::move(w);
}

}  // namespace

LanczosFactorization lanczosRun(const SymmetricLinearOperator& a, std::span<const double> g,
                                std::size_t kMax, double breakdownTol) {
  if (g.size() != a.dimension()) throw std::invalid_argument("lanczosRun: dimension mismatch");
  const double beta0 = norm2(g);
  if (beta0 == 0.0) throw ZeroStartVector();
  LanczosFactorization f;
  f.beta0 = beta0;
  f.next.assign(g.begin(), g.end());
  scale(1.0 / beta0, f.next);
  step(f, a, breakdownTol);
  if (!f.brokenDown) advanceLanczos(f, a, kMax, breakdownTol);
  return f;
}

void advanceLanczos(LanczosFactorization& f, const SymmetricLinearOperator& a, std::size_t steps,
                    double breakdownTol) {
  if (steps == 0) return;
  if (f.brokenDown) throw AlreadyBrokenDown();
  for (std::size_t s = 0; s < steps && !f.brokenDown; ++s) step(f, a, breakdownTol);
}

LanczosFactorization extendLanczos(const LanczosFactorization& f, const SymmetricLinearOperator& a,
                                   std::size_t steps, double breakdownTol) {
  LanczosFactorization out = f;
  advanceLanczos(out, a, steps, breakdownTol);
  return out;
}

EigenRange spectralRange(const SymmetricLinearOperator& a, double tol, std::size_t maxSteps,
                         std::uint64_t seed) {
  if (const Vector* d = a.diagonal()) {
    const auto [lo, hi] = std::minmax_element(d->begin(), d->end());
    return {*lo, *hi};
  }
  if (const DenseSymmetric* m = a.dense()) {
    return extremalEigTridiagonal(householderTridiagonalize(*m), tol);
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vector start(a.dimension());
  for (auto& v : start) v = normal(rng);
  const std::size_t k = std::min(maxSteps, a.dimension() - 1);
  const LanczosFactorization f = lanczosRun(a, start, k);
  return extremalEigTridiagonal(f.T, tol);
}

}  // namespace trslab
