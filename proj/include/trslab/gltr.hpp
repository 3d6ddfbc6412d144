#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "trslab/lanczos.hpp"
#include "trslab/trs_solver.hpp"

namespace trslab {

struct GltrOptions {
  double residTol = 1e-13;
  std::size_t kMax = 300;
  bool keepIterates = false;     // store s_k for every k
  bool verifyResiduals = false;  // form s_k each step for the explicit residual and direct objective
  double breakdownTol = 1e-12;
  SecularOptions secular;
};

struct ConvergenceRecord {
  std::size_t k = 0;
  double lambda = 0.0;
  double q = 0.0;              // closed form through T_k
  double residFormula = 0.0;   // beta_{k+1} |e_{k+1}'h_k|
  std::optional<double> residExplicit;
  std::optional<double> qDirect;  // g's_k + s_k'As_k/2
  double lastEntry = 0.0;
  CaseTag caseTag = CaseTag::Boundary;
  int secularIterations = 0;
};

enum class Termination { ResidualTol, Breakdown, KMax };

std::string_view terminationName(Termination t);

struct GltrResult {
  std::vector<ConvergenceRecord> history;
  double lambda = 0.0;
  Vector s;
  double q = 0.0;
  Termination termination = Termination::KMax;
  LanczosFactorization factorization;
  std::vector<Vector> reducedSolutions;  // h_k for every k
  std::vector<Vector> iterates;          // s_k, only with keepIterates
};

/// Throws ZeroGradient, NearHardCase (propagated from the reduced solves).
GltrResult gltrSolve(const SymmetricLinearOperator& a, std::span<const double> g, double delta,
                     const GltrOptions& opts = {});

/// q(s_k) = -beta0^2 e1'(T+lambda I)^{-1}e1 / 2 - lambda delta^2 / 2.
/// Throws IndefiniteShift.
double objectiveViaTridiagonal(const SymmetricTridiagonal& t, double lambda, double beta0,
                               double delta);

/// ||(A + lambda I) s + g||
double explicitResidual(const SymmetricLinearOperator& a, std::span<const double> g,
                        double lambda, std::span<const double> s);

/// g's + s'As/2
double objectiveDirect(const SymmetricLinearOperator& a, std::span<const double> g,
                       std::span<const double> s);

/// s = Q(:, 0..h.size()-1) h
Vector expandReduced(const DenseMatrix& q, std::span<const double> h);

}  // namespace trslab
