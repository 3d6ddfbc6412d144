#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trslab/bounds.hpp"
#include "trslab/eig_equiv.hpp"
#include "trslab/gltr.hpp"
#include "trslab/trs_solver.hpp"

namespace trslab {

enum class Family { Evenly1a, Exp1b, ChebNodes2, Strakos3, RandomSym4, FromFile };

/// "1a", "1b", "2", "3", "4", "file"
std::string_view familyName(Family f);
/// Accepts the short names above and the long forms ("evenly1a", "strakos3", ...).
/// Throws InvalidSpec.
Family parseFamily(std::string_view name);

struct ProblemSpec {
  Family family = Family::Evenly1a;
  std::size_t n = 10000;
  double delta = 1.0;
  std::uint64_t seed = 1;
  std::map<std::string, double> params;
  std::string path;  // FromFile only; serialized as params.path

  /// Family defaults: n = 10000 (2000 for RandomSym4).
  static ProblemSpec defaults(Family f);
  /// Throws InvalidSpec.
  void validate() const;
  double param(const std::string& key, double fallback) const;
};

/// JSON with fields family, n, delta, seed, params{}. Throws InvalidSpec.
ProblemSpec specFromJson(const std::string& text);
std::string specToJson(const ProblemSpec& spec);

struct ProblemInstance {
  SymmetricLinearOperator a;
  Vector g;
  /// Known eigenvalues when A = Q diag(eigenvalues) Q', with Q the product of `reflectors`
  /// (unit Householder vectors; identity when empty).
  std::optional<Vector> eigenvalues;
  std::vector<Vector> reflectors;
  std::optional<EigenRange> range;
};

/// Seeded Gaussian vector normalized to unit length (the families' gradient).
Vector seededUnitVector(std::size_t n, std::uint64_t seed);

/// Eigenvalues of the diagonal families, in generator order.
Vector familySpectrum(const ProblemSpec& spec);

/// Throws InvalidSpec.
ProblemInstance generate(const ProblemSpec& spec);

/// x -> Q'x and x -> Qx for the instance similarity.
Vector toEigenbasis(const ProblemInstance& inst, std::span<const double> x);
Vector fromEigenbasis(const ProblemInstance& inst, std::span<const double> x);

struct ReferenceSolution {
  double lambdaOpt = 0.0;
  Vector sOpt;
  double qOpt = 0.0;
  double alpha1 = 0.0;
  double alphaN = 0.0;
  double kappa = 0.0;
  double t = 0.0;
  double normM = 0.0;
  double y1Norm = 0.0;
  ReferenceEigenpair eigenpair;
  KktReport kkt;
  std::string method;  // "secular" or "gltr"
};

/// Throws NearHardCase, HardOrIndefiniteShift.
ReferenceSolution referenceSolution(const ProblemInstance& inst, double delta);

struct ExperimentOptions {
  std::size_t kMax = 300;
  double residTol = 1e-15;
  std::size_t checkpointEvery = 5;  // sep (and optionally gamma) every this many k
  bool gammaTilde = false;
};

/// One CSV row.
struct ExperimentRow {
  double k = 0;
  double lambdaGap = 0, lambdaGapBound = 0;
  double sinAngle = 0, sinAngleBound = 0;
  double qGap = 0, qGapBound = 0;
  double resid = 0, residFormula = 0, residBound = 0;
  double sGap = 0, sGapBound = 0;
  double cgGap = 0, cgGapBound = 0;

  static constexpr std::size_t kColumns = 14;
  std::array<double, kColumns> values() const;
  static ExperimentRow fromValues(const std::array<double, kColumns>& v);
};

/// Quantities that are not part of the CSV but are checked by the test suites.
struct RowDiagnostics {
  std::size_t k = 0;
  double lambda = 0;
  double q = 0;
  double qDirect = 0;
  double eigResidual = 0;  // ||M_k z - lambda_k z|| / ||M_k||, NaN when interior
  double sLambda = 0;
  double sep = 0;          // NaN off checkpoints
  double eta1 = 0, eta2 = 0, eta1Cap = 0, eta2Cap = 0;
  double krylovDistance = 0;  // ||(I - pi_k) s_opt|| / ||s_opt||
  double krylovDistanceBound = 0;
  double subspaceSine = 0;    // sin of the angle between (y1; y2) and the doubled Krylov space
  double subspaceSineBound = 0;
  double y2Distance = 0;      // ||(I - pi_k) y2||
  double y2DistanceBound = 0;
  double qIntermediate = 0;   // 2 (alpha1 + lambda) ||pi_k s_opt - s_opt||^2
  double gamma = 0;           // NaN unless requested
  double firstLambdaBound = 0;
  CaseTag caseTag = CaseTag::Boundary;
};

struct ExperimentTable {
  ProblemSpec spec;
  ReferenceSolution reference;
  SpectrumData spectrum;
  std::vector<ExperimentRow> rows;
  std::vector<RowDiagnostics> diagnostics;
  Termination termination = Termination::KMax;
  std::optional<std::size_t> k0;  // first k with lambda gap <= alphaN + lambdaOpt
  double normA = 0.0;
  double scale = 0.0;  // ||A|| delta + ||g||
};

ExperimentTable runExperiment(const ProblemSpec& spec, const ExperimentOptions& opts = {});
ExperimentTable runExperiment(const ProblemSpec& spec, const ProblemInstance& inst,
                              const ExperimentOptions& opts = {});

extern const char* const kCsvHeader;

std::string formatCsv(const std::vector<ExperimentRow>& rows);
/// Throws ParseError.
std::vector<ExperimentRow> parseCsv(const std::string& text);
/// gnuplot script with four log-scale panels reading `csvName`.
std::string formatPlotScript(const ExperimentTable& table, const std::string& csvName);
std::string summaryJson(const ExperimentTable& table);

/// Throws Error for an empty table, IoError when the file cannot be written.
void emitCsv(const ExperimentTable& table, const std::filesystem::path& path);
void emitPlotScript(const ExperimentTable& table, const std::filesystem::path& path,
                    const std::string& csvName);
/// Writes <name>.csv, <name>.plt and <name>.summary.json into dir.
void writeExperimentOutputs(const ExperimentTable& table, const std::filesystem::path& dir,
                            const std::string& name);

struct RateFit {
  double slope = 0.0;  // d ln(value) / dk
  std::size_t points = 0;
  std::size_t kFirst = 0;
  std::size_t kLast = 0;
};

/// Least-squares slope of ln(value) against k, starting at the first point with
/// low < value <= high and stopping before the first later point at or below low.
/// Returns nullopt when fewer than three points qualify.
std::optional<RateFit> fitRate(const std::vector<double>& ks, const std::vector<double>& values,
                               double low, double high);

}  // namespace trslab
