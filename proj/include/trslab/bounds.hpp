#pragma once

#include <cstddef>

#include "trslab/linalg.hpp"

namespace trslab {

/// Spectrum-dependent constants shared by every bound.
struct SpectrumData {
  double alpha1 = 0.0;  // largest eigenvalue of A
  double alphaN = 0.0;  // smallest eigenvalue of A
  double lambdaOpt = 0.0;
  double kappa = 1.0;  // (alpha1 + lambda) / (alphaN + lambda)
  double t = 0.0;      // (sqrt(kappa) - 1) / (sqrt(kappa) + 1)
  double eta = 0.0;    // (kappa + 1) / (kappa - 1); infinite when kappa == 1
  double beta0 = 0.0;
  double delta = 0.0;
};

/// Throws HardOrIndefiniteShift when alphaN + lambdaOpt <= 0.
SpectrumData spectrumData(double alpha1, double alphaN, double lambdaOpt, double beta0,
                          double delta);

/// eta - sqrt(eta^2 - 1), the same factor as t written through eta.
double convergenceFactorFromEta(double eta);

/// 2 t^{k+1}
double cgDistanceBound(std::size_t k, const SpectrumData& sd);

/// (1 + (k+2)/|ln t|) (4/(1-t^2)) t^{k+3}; 0 at t == 0. Throws DegenerateT for t >= 1.
double epsilon2Bound(std::size_t k, const SpectrumData& sd);

/// Bound on ||(I - pi_k) y2|| given ||y1||. Throws DegenerateSpectrum, DegenerateT.
double y2DistanceBound(std::size_t k, const SpectrumData& sd, double y1Norm);

/// c_k = 2 + 16(alpha1+lambda)/((alpha1-alphaN)^2 (1-t^2)) (1 + (k+2)/|ln t|) t^2.
/// Throws DegenerateSpectrum when alpha1 == alphaN.
double ckFactor(std::size_t k, const SpectrumData& sd);

/// c_k ||y1|| t^{k+1}
double sinSubspaceBound(std::size_t k, const SpectrumData& sd, double y1Norm);

/// c_k s(lambda_k) gamma_k ||y1|| t^{k+1}; an overestimate, diagnostic only.
double firstLambdaBound(std::size_t k, const SpectrumData& sd, double sLambda, double gamma,
                        double y1Norm);

/// (4 delta / beta0) t^{2(k+1)}
double cgEnergyBound(std::size_t k, const SpectrumData& sd);

struct EtaFactors {
  double eta1 = 0.0;
  double eta2 = 0.0;
  double cap1 = 0.0;
  double cap2 = 0.0;
  bool capsHold = false;
};

/// Exact T_k-dependent factors and their k-independent caps. Throws IndefiniteShift.
EtaFactors etaFactors(const SymmetricTridiagonal& t, double lambdaOpt, double beta0, double delta,
                      double alpha1);

/// (4 eta1 delta / beta0 + 8 (alpha1+lambda) eta2 delta^2) t^{2(k+1)}
double lambdaGapBound(std::size_t k, const SpectrumData& sd, double eta1, double eta2);

/// 8 (alpha1+lambda) delta^2 t^{2(k+1)}
double qGapBound(std::size_t k, const SpectrumData& sd);

/// c_k (1 + ||M|| / sep) t^{k+1}. Throws NonpositiveSep.
double sinAngleBound(std::size_t k, const SpectrumData& sd, double normM, double sep);

/// 4 sqrt(kappa) delta t^{k+1}
double sGapBound(std::size_t k, const SpectrumData& sd);

/// (4 eta1 delta^2/beta0 + 8(alpha1+lambda) eta2 delta^3) t^{2(k+1)}
///   + 4 sqrt(kappa) delta (alpha1+lambda) t^{k+1}
double residualBound(std::size_t k, const SpectrumData& sd, double eta1, double eta2);

/// Chebyshev polynomial of the second kind, U_0 = 1, U_1 = 2x.
double chebyshevU(std::size_t j, double x);

/// sum_{j < terms} (j+1) t^j U_j(x)
double chebGeneratingPartialSum(std::size_t terms, double t, double x);

/// (1 - t^2) / (1 + t^2 - 2 t x)^2, the limit of the partial sums for |t| < 1.
double chebGeneratingClosedForm(double t, double x);

/// p(x) = (4t^2/(1-t^2)) sum_{j=0}^{kTrunc} (j+1) t^j U_j(x) with t derived from eta;
/// a polynomial approximation of 1/(x - eta)^2 on [-1, 1].
double chebGenPolyEval(std::size_t kTrunc, double eta, double x);

/// max over an evenly spaced grid on [-1,1] of |1/(x-eta)^2 - p(x)|.
double chebGenPolyGridError(std::size_t kTrunc, double eta, std::size_t gridPoints = 1001);

}  // namespace trslab
