#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trslab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A shifted tridiagonal T + lambda*I turned out not to be positive definite.
class IndefiniteShift : public Error {
 public:
  IndefiniteShift(std::size_t pivot, double lambda)
      : Error("shifted matrix is not positive definite (pivot " +
              std::to_string(pivot) + ", shift " + std::to_string(lambda) + ")"),
        pivot_(pivot),
        lambda_(lambda) {}

  std::size_t pivot() const noexcept { return pivot_; }
  double lambda() const noexcept { return lambda_; }

 private:
  std::size_t pivot_;
  double lambda_;
};

class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// The secular equation has no root to the right of -theta_min within
/// floating-point resolution: the instance is (numerically) in the hard case.
class NearHardCase : public Error {
 public:
  NearHardCase(double gap, double lambda, double thetaMin)
      : Error("near hard case: secular root collapses onto -theta_min (gap " +
              std::to_string(gap) + ")"),
        gap_(gap),
        lambda_(lambda),
        thetaMin_(thetaMin) {}

  double gap() const noexcept { return gap_; }
  double lambda() const noexcept { return lambda_; }
  double thetaMin() const noexcept { return thetaMin_; }

 private:
  double gap_;
  double lambda_;
  double thetaMin_;
};

class ZeroStartVector : public Error {
 public:
  ZeroStartVector() : Error("Lanczos start vector is zero") {}
};

class AlreadyBrokenDown : public Error {
 public:
  AlreadyBrokenDown() : Error("Lanczos factorization has already broken down") {}
};

class ZeroGradient : public Error {
 public:
  ZeroGradient() : Error("gradient is zero") {}
};

class ZeroVector : public Error {
 public:
  ZeroVector() : Error("vector is zero") {}
};

class VerificationFailed : public Error {
 public:
  VerificationFailed(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// g'y2 vanished: the eigenvector carries no solution information (hard case).
class HardCaseSignal : public Error {
 public:
  HardCaseSignal() : Error("g'y2 is zero: hard case") {}
};

class HardOrIndefiniteShift : public Error {
 public:
  explicit HardOrIndefiniteShift(double margin)
      : Error("alpha_n + lambda_opt = " + std::to_string(margin) + " is not positive"),
        margin_(margin) {}
  double margin() const noexcept { return margin_; }

 private:
  double margin_;
};

class DegenerateT : public Error {
 public:
  explicit DegenerateT(double t)
      : Error("convergence factor t = " + std::to_string(t) + " outside (0,1)") {}
};

class DegenerateSpectrum : public Error {
 public:
  DegenerateSpectrum() : Error("alpha_1 == alpha_n: spectrum is a single point") {}
};

class NonpositiveSep : public Error {
 public:
  explicit NonpositiveSep(double sep)
      : Error("sep(mu_1, C_k) = " + std::to_string(sep) + " is not positive") {}
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; carries the 1-based offending line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace trslab
