#include "trslab/trs_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "trslab/errors.hpp"
#include "trslab/lanczos.hpp"

namespace trslab {

std::string_view caseName(CaseTag c) {
  switch (c) {
    case CaseTag::Boundary: return "boundary";
    case CaseTag::Interior: return "interior";
    case CaseTag::NearHard: return "near-hard";
  }
  return "unknown";
}

namespace {

void checkRadius(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw std::invalid_argument("trust-region radius must be positive and finite");
}

}  // namespace

TrsSolution solveTrsTridiagonal(const SymmetricTridiagonal& t, double beta0, double delta,
                                const SecularOptions& opts) {
  t.validate();
  checkRadius(delta);
  if (!(beta0 > 0.0)) throw ZeroGradient();
  const std::size_t m = t.order();
  Vector rhs(m, 0.0);
  rhs[0] = -beta0;

  TrsSolution sol;
  {
    const LdlFactorization f0 = ldlShifted(t, 0.0);
    if (f0.ok()) {
      Vector h = f0.solve(rhs);
      if (norm2(h) <= delta) {
        sol.lambda = 0.0;
        sol.h = std::move(h);
        sol.caseTag = CaseTag::Interior;
        return sol;
      }
    }
  }

  const double thetaMin = extremalEigTridiagonal(t).min;
  double lo = std::max(0.0, -thetaMin);
  double hi = beta0 / delta + t.normInf();
  if (hi <= lo) hi = lo + std::max(1.0, std::abs(lo)) * 1e-8;

  double lambda = lo + std::max(beta0 / delta - thetaMin, 1.0) * 1e-3;
  if (opts.lambdaLower && *opts.lambdaLower > lo && *opts.lambdaLower < hi)
    lambda = *opts.lambdaLower;
  if (lambda >= hi) lambda = 0.5 * (lo + hi);

  const double collapse = 1e-14 * (1.0 + std::abs(thetaMin));
  bool sawAbove = false;
  double bestMiss = std::numeric_limits<double>::infinity();
  TrsSolution best;

  for (int it = 1; it <= opts.maxIterations; ++it) {
    const LdlFactorization f = ldlShifted(t, lambda);
    double next;
    if (!f.ok()) {
      lo = std::max(lo, lambda);
      next = 0.5 * (lo + hi);
    } else {
      Vector h = f.solve(rhs);
      const double nh = norm2(h);
      const double miss = std::abs(nh - delta);
      if (miss < bestMiss) {
        bestMiss = miss;
        best.lambda = lambda;
        best.h = h;
        best.secularIterations = it;
      }
      if (nh > delta) {
        lo = lambda;
        sawAbove = true;
      } else {
        hi = lambda;
      }
      const Vector w = f.solve(h);
      const double hw = dot(h, w);
      next = lambda + (nh - delta) / delta * (nh * nh / hw);
      if (miss <= opts.tol * delta) {
        sol.lambda = lambda;
        sol.h = std::move(h);
        sol.caseTag = CaseTag::Boundary;
        sol.secularIterations = it;
        // one more Newton step is nearly free and takes lambda to working precision
        if (next > lo && next < hi && next != lambda) {
          const LdlFactorization fp = ldlShifted(t, next);
          if (fp.ok()) {
            Vector hp = fp.solve(rhs);
            if (std::abs(norm2(hp) - delta) <= miss) {
              sol.lambda = next;
              sol.h = std::move(hp);
            }
          }
        }
        return sol;
      }
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    }
    if (hi - lo <= collapse) {
      if (!sawAbove) throw NearHardCase(hi + thetaMin, lambda, thetaMin);
      if (best.h.empty()) break;
      best.caseTag = CaseTag::Boundary;
      best.secularIterations = it;
      return best;
    }
    lambda = next;
  }
  throw NoConvergence("secular iteration budget exhausted", bestMiss / delta);
}

TrsSolution solveTrsEigenbasis(std::span<const double> theta, std::span<const double> c,
                               double delta, const SecularOptions&) {
  checkRadius(delta);
  const std::size_t n = theta.size();
  if (c.size() != n) throw std::invalid_argument("solveTrsEigenbasis: size mismatch");
  const double gnorm = norm2(c);
  if (gnorm == 0.0) throw ZeroGradient();
  const double thetaMin = *std::min_element(theta.begin(), theta.end());

  Vector h(n);
  auto fill = [&](double lambda) {
    for (std::size_t i = 0; i < n; ++i) h[i] = -c[i] / (theta[i] + lambda);
    return norm2(h);
  };

  TrsSolution sol;
  if (thetaMin > 0.0 && fill(0.0) <= delta) {
    sol.lambda = 0.0;
    sol.h = h;
    sol.caseTag = CaseTag::Interior;
    return sol;
  }

  double lo = std::max(0.0, -thetaMin);
  if (thetaMin <= 0.0) {
    // No pole at -theta_min when g has no weight on that eigenspace.
    const double cluster = 1e-14 * (1.0 + std::abs(thetaMin));
    double weight = 0.0;
    Vector rest(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (theta[i] - thetaMin <= cluster)
        weight += c[i] * c[i];
      else
        rest[i] = c[i] / (theta[i] - thetaMin);
    }
    if (std::sqrt(weight) <= 1e-13 * gnorm) {
      const double restNorm = norm2(rest);
      if (restNorm <= delta) throw NearHardCase(delta - restNorm, -thetaMin, thetaMin);
    }
  }

  double hi = std::max(lo, gnorm / delta - thetaMin);
  hi += std::max(1.0, std::abs(hi)) * 1e-12;
  int it = 0;
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi || ++it > 4000) break;
    if (fill(mid) > delta)
      lo = mid;
    else
      hi = mid;
  }
  double lambda = hi;
  double miss = std::abs(fill(hi) - delta);
  if (thetaMin + lo > 0.0) {
    const double missLo = std::abs(fill(lo) - delta);
    if (missLo < miss) lambda = lo;
  }
  fill(lambda);
  sol.lambda = lambda;
  sol.h = h;
  sol.caseTag = CaseTag::Boundary;
  sol.secularIterations = it;
  return sol;
}

TrsSolution solveTrsDiagonal(std::span<const double> d, std::span<const double> g, double delta,
                             const SecularOptions& opts) {
  return solveTrsEigenbasis(d, g, delta, opts);
}

TrsSolution solveTrsDense(const DenseSymmetric& a, std::span<const double> g, double delta,
                          const SecularOptions& opts, std::size_t orderCap) {
  if (a.order() > orderCap) throw std::invalid_argument("solveTrsDense: order exceeds oracle cap");
  if (g.size() != a.order()) throw std::invalid_argument("solveTrsDense: size mismatch");
  const SymmetricEigen eig = symmetricEigDense(a);
  const Vector c = eig.vectors.transposeMultiply(g);
  TrsSolution sol = solveTrsEigenbasis(eig.values, c, delta, opts);
  sol.h = eig.vectors.multiply(sol.h);
  return sol;
}

KktReport checkKkt(const SymmetricLinearOperator& a, std::span<const double> g, double delta,
                   double lambda, std::span<const double> s, double tol,
                   std::optional<double> thetaMin) {
  KktReport r;
  const double ns = norm2(s);
  Vector res = a.apply(s);
  axpy(lambda, s, res);
  axpy(1.0, g, res);
  const double tmin = thetaMin ? *thetaMin : spectralRange(a).min;
  r.feasibilityGap = delta - ns;
  r.stationarity = norm2(res);
  r.complementarity = lambda * (delta - ns);
  r.curvatureMargin = tmin + lambda;
  r.pass = lambda >= 0.0 && r.feasibilityGap >= -tol * delta &&
           r.stationarity <= tol * (1.0 + norm2(g)) &&
           std::abs(r.complementarity) <= tol * delta * (1.0 + lambda) &&
           r.curvatureMargin >= -tol * (1.0 + std::abs(tmin));
  return r;
}

}  // namespace trslab
