#include "trslab/gltr.hpp"

#include <cmath>

#include "trslab/errors.hpp"

namespace trslab {

std::string_view terminationName(Termination t) {
  switch (t) {
    case Termination::ResidualTol: return "residual-tol";
    case Termination::Breakdown: return "breakdown";
    case Termination::KMax: return "kmax";
  }
  return "unknown";
}

double objectiveViaTridiagonal(const SymmetricTridiagonal& t, double lambda, double beta0,
                               double delta) {
  const Vector e1 = unitVector(t.order(), 0);
  const Vector x = solveShifted(t, lambda, e1);
  return -0.5 * beta0 * beta0 * x[0] - 0.5 * lambda * delta * delta;
}

double explicitResidual(const SymmetricLinearOperator& a, std::span<const double> g,
                        double lambda, std::span<const double> s) {
  Vector r = a.apply(s);
  axpy(lambda, s, r);
  axpy(1.0, g, r);
  return norm2(r);
}

double objectiveDirect(const SymmetricLinearOperator& a, std::span<const double> g,
                       std::span<const double> s) {
  const Vector as = a.apply(s);
  return dot(g, s) + 0.5 * dot(s, as);
}

Vector expandReduced(const DenseMatrix& q, std::span<const double> h) {
  Vector s(q.rows(), 0.0);
  for (std::size_t j = 0; j < h.size(); ++j) axpy(h[j], q.col(j), s);
  return s;
}

GltrResult gltrSolve(const SymmetricLinearOperator& a, std::span<const double> g, double delta,
                     const GltrOptions& opts) {
  if (!(delta > 0.0)) throw std::invalid_argument("gltrSolve: radius must be positive");
  if (norm2(g) == 0.0) throw ZeroGradient();

  GltrResult out;
  out.factorization = lanczosRun(a, g, 0, opts.breakdownTol);
  LanczosFactorization& f = out.factorization;
  const double beta0 = f.beta0;

  SecularOptions secular = opts.secular;
  for (std::size_t k = 0;; ++k) {
    const TrsSolution sol = solveTrsTridiagonal(f.T, beta0, delta, secular);
    if (sol.lambda > 0.0) secular.lambdaLower = sol.lambda;

    ConvergenceRecord rec;
    rec.k = k;
    rec.lambda = sol.lambda;
    rec.lastEntry = sol.h.back();
    rec.residFormula = f.betaNext * std::abs(rec.lastEntry);
    rec.q = objectiveViaTridiagonal(f.T, sol.lambda, beta0, delta);
    rec.caseTag = sol.caseTag;
    rec.secularIterations = sol.secularIterations;
    if (opts.verifyResiduals || opts.keepIterates) {
      Vector s = expandReduced(f.Q, sol.h);
      if (opts.verifyResiduals) {
        rec.residExplicit = explicitResidual(a, g, sol.lambda, s);
        rec.qDirect = objectiveDirect(a, g, s);
      }
      if (opts.keepIterates) out.iterates.push_back(std::move(s));
    }
    out.history.push_back(rec);
    out.reducedSolutions.push_back(sol.h);

    bool stop = true;
    if (f.brokenDown)
      out.termination = Termination::Breakdown;
    else if (rec.residFormula <= opts.residTol)
      out.termination = Termination::ResidualTol;
    else if (k >= opts.kMax)
      out.termination = Termination::KMax;
    else
      stop = false;

    if (stop) {
      out.lambda = sol.lambda;
      out.q = rec.q;
      out.s = opts.keepIterates ? out.iterates.back() : expandReduced(f.Q, sol.h);
      return out;
    }
    advanceLanczos(f, a, 1, opts.breakdownTol);
  }
}

}  // namespace trslab
