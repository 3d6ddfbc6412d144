#include "trslab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trslab/errors.hpp"

namespace trslab {

SpectrumData spectrumData(double alpha1, double alphaN, double lambdaOpt, double beta0,
                          double delta) {
  const double margin = alphaN + lambdaOpt;
  if (!(margin > 0.0)) throw HardOrIndefiniteShift(margin);
  SpectrumData sd;
  sd.alpha1 = alpha1;
  sd.alphaN = alphaN;
  sd.lambdaOpt = lambdaOpt;
  sd.beta0 = beta0;
  sd.delta = delta;
  sd.kappa = (alpha1 + lambdaOpt) / margin;
  const double r = std::sqrt(sd.kappa);
  sd.t = (r - 1.0) / (r + 1.0);
  sd.eta = sd.kappa > 1.0 ? (sd.kappa + 1.0) / (sd.kappa - 1.0)
                          : std::numeric_limits<double>::infinity();
  return sd;
}

double convergenceFactorFromEta(double eta) {
  if (std::isinf(eta)) return 0.0;
  return eta - std::sqrt((eta - 1.0) * (eta + 1.0));
}

namespace {

double power(double t, std::size_t e) { return std::pow(t, static_cast<double>(e)); }

void requireUnitInterval(double t) {
  if (!(t >= 0.0) || t >= 1.0) throw DegenerateT(t);
}

// (1 + (k+2)/|ln t|), the factor coming from the derivative of the generating sum
double logFactor(std::size_t k, double t) {
  return 1.0 + static_cast<double>(k + 2) / std::abs(std::log(t));
}

double spreadFactor(const SpectrumData& sd) {
  const double spread = sd.alpha1 - sd.alphaN;
  if (spread == 0.0) throw DegenerateSpectrum();
  return 16.0 * (sd.alpha1 + sd.lambdaOpt) / (spread * spread * (1.0 - sd.t * sd.t));
}

}  // namespace

double cgDistanceBound(std::size_t k, const SpectrumData& sd) {
  return 2.0 * power(sd.t, k + 1);
}

double epsilon2Bound(std::size_t k, const SpectrumData& sd) {
  requireUnitInterval(sd.t);
  if (sd.t == 0.0) return 0.0;
  return logFactor(k, sd.t) * (4.0 / (1.0 - sd.t * sd.t)) * power(sd.t, k + 3);
}

double y2DistanceBound(std::size_t k, const SpectrumData& sd, double y1Norm) {
  requireUnitInterval(sd.t);
  if (sd.t == 0.0) return 0.0;
  return spreadFactor(sd) * y1Norm * logFactor(k, sd.t) * power(sd.t, k + 3);
}

double ckFactor(std::size_t k, const SpectrumData& sd) {
  requireUnitInterval(sd.t);
  if (sd.t == 0.0) return 2.0;
  return 2.0 + spreadFactor(sd) * logFactor(k, sd.t) * sd.t * sd.t;
}

double sinSubspaceBound(std::size_t k, const SpectrumData& sd, double y1Norm) {
  return ckFactor(k, sd) * y1Norm * power(sd.t, k + 1);
}

double firstLambdaBound(std::size_t k, const SpectrumData& sd, double sLambda, double gamma,
                        double y1Norm) {
  return ckFactor(k, sd) * sLambda * gamma * y1Norm * power(sd.t, k + 1);
}

double cgEnergyBound(std::size_t k, const SpectrumData& sd) {
  return 4.0 * sd.delta / sd.beta0 * power(sd.t, 2 * (k + 1));
}

EtaFactors etaFactors(const SymmetricTridiagonal& t, double lambdaOpt, double beta0, double delta,
                      double alpha1) {
  const Vector x = solveShifted(t, lambdaOpt, unitVector(t.order(), 0));
  const double e = dot(x, x);
  const double d2 = delta * delta;
  const double b2 = beta0 * beta0;
  EtaFactors f;
  f.eta1 = b2 / (d2 + b2 * e);
  f.eta2 = 2.0 / (d2 + b2 * e);
  const double c = (alpha1 + lambdaOpt) * (alpha1 + lambdaOpt);
  f.cap1 = b2 * c / (b2 + c * d2);
  f.cap2 = 2.0 * c / (b2 + c * d2);
  const double slack = 1.0 + 1e-12;
  f.capsHold = f.eta1 <= f.cap1 * slack && f.eta2 <= f.cap2 * slack;
  return f;
}

double lambdaGapBound(std::size_t k, const SpectrumData& sd, double eta1, double eta2) {
  const double d = sd.delta;
  return (4.0 * eta1 * d / sd.beta0 + 8.0 * (sd.alpha1 + sd.lambdaOpt) * eta2 * d * d) *
         power(sd.t, 2 * (k + 1));
}

double qGapBound(std::size_t k, const SpectrumData& sd) {
  return 8.0 * (sd.alpha1 + sd.lambdaOpt) * sd.delta * sd.delta * power(sd.t, 2 * (k + 1));
}

double sinAngleBound(std::size_t k, const SpectrumData& sd, double normM, double sep) {
  if (!(sep > 0.0)) throw NonpositiveSep(sep);
  return ckFactor(k, sd) * (1.0 + normM / sep) * power(sd.t, k + 1);
}

double sGapBound(std::size_t k, const SpectrumData& sd) {
  return 4.0 * std::sqrt(sd.kappa) * sd.delta * power(sd.t, k + 1);
}

double residualBound(std::size_t k, const SpectrumData& sd, double eta1, double eta2) {
  const double d = sd.delta;
  const double shiftNorm = sd.alpha1 + sd.lambdaOpt;
  const double fast =
      (4.0 * eta1 * d * d / sd.beta0 + 8.0 * shiftNorm * eta2 * d * d * d) * power(sd.t, 2 * (k + 1));
  return fast + 4.0 * std::sqrt(sd.kappa) * d * shiftNorm * power(sd.t, k + 1);
}

double chebyshevU(std::size_t j, double x) {
  double prev = 1.0;
  if (j == 0) return prev;
  double cur = 2.0 * x;
  for (std::size_t i = 1; i < j; ++i) {
    const double nxt = 2.0 * x * cur - prev;
    prev = cur;
    cur = nxt;
  }
  return cur;
}

double chebGeneratingPartialSum(std::size_t terms, double t, double x) {
  double sum = 0.0;
  double prev = 0.0;  // U_{j-1}
  double cur = 1.0;   // U_j
  double tj = 1.0;
  for (std::size_t j = 0; j < terms; ++j) {
    sum += static_cast<double>(j + 1) * tj * cur;
    const double nxt = (j == 0 ? 2.0 * x : 2.0 * x * cur - prev);
    prev = cur;
    cur = nxt;
    tj *= t;
  }
  return sum;
}

double chebGeneratingClosedForm(double t, double x) {
  const double d = 1.0 + t * t - 2.0 * t * x;
  return (1.0 - t * t) / (d * d);
}

double chebGenPolyEval(std::size_t kTrunc, double eta, double x) {
  const double t = convergenceFactorFromEta(eta);
  return 4.0 * t * t / (1.0 - t * t) * chebGeneratingPartialSum(kTrunc + 1, t, x);
}

double chebGenPolyGridError(std::size_t kTrunc, double eta, std::size_t gridPoints) {
  double worst = 0.0;
  for (std::size_t i = 0; i < gridPoints; ++i) {
    const double x = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(gridPoints - 1);
    const double target = 1.0 / ((x - eta) * (x - eta));
    worst = std::max(worst, std::abs(target - chebGenPolyEval(kTrunc, eta, x)));
  }
  return worst;
}

}  // namespace trslab
