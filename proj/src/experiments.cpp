#include "trslab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "trslab/errors.hpp"
#include "trslab/lanczos.hpp"
#include "trslab/matrix_market.hpp"

namespace trslab {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::uint64_t kMatrixStream = 0x9e3779b97f4a7c15ULL;

struct FamilyInfo {
  Family family;
  const char* shortName;
  const char* longName;
};

constexpr FamilyInfo kFamilies[] = {
    {Family::Evenly1a, "1a", "evenly1a"},     {Family::Exp1b, "1b", "exp1b"},
    {Family::ChebNodes2, "2", "chebnodes2"},  {Family::Strakos3, "3", "strakos3"},
    {Family::RandomSym4, "4", "randomsym4"},  {Family::FromFile, "file", "fromfile"},
};

std::vector<std::string> allowedParams(Family f) {
  switch (f) {
    case Family::Evenly1a:
    case Family::Exp1b: return {"reflectors"};
    case Family::ChebNodes2: return {"a", "b", "reflectors"};
    case Family::Strakos3: return {"alpha1", "alphaN", "rho", "mirror", "reflectors"};
    case Family::RandomSym4: return {};
    case Family::FromFile: return {};
  }
  return {};
}

Vector gaussianUnit(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vector g(n);
  for (auto& v : g) v = normal(rng);
  scale(1.0 / norm2(g), g);
  return g;
}

void applyReflector(std::span<const double> u, std::span<double> x) {
  axpy(-2.0 * dot(u, x), u, x);
}

}  // namespace

Vector seededUnitVector(std::size_t n, std::uint64_t seed) { return gaussianUnit(n, seed); }

std::string_view familyName(Family f) {
  for (const auto& info : kFamilies)
    if (info.family == f) return info.shortName;
  return "unknown";
}

Family parseFamily(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (const auto& info : kFamilies)
    if (key == info.shortName || key == info.longName) return info.family;
  throw InvalidSpec("unknown problem family '" + std::string(name) + "'");
}

ProblemSpec ProblemSpec::defaults(Family f) {
  ProblemSpec s;
  s.family = f;
  s.n = f == Family::RandomSym4 ? 2000 : 10000;
  return s;
}

double ProblemSpec::param(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void ProblemSpec::validate() const {
  if (family != Family::FromFile && n < 2) throw InvalidSpec("n must be at least 2");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidSpec("delta must be positive");
  const auto allowed = allowedParams(family);
  for (const auto& [key, value] : params) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw InvalidSpec("parameter '" + key + "' is not valid for family " +
                        std::string(familyName(family)));
    if (!std::isfinite(value)) throw InvalidSpec("parameter '" + key + "' is not finite");
  }
  const double refl = param("reflectors", 0.0);
  if (refl < 0.0 || refl != std::floor(refl)) throw InvalidSpec("reflectors must be a count");
  if (family == Family::Strakos3) {
    const double rho = param("rho", 0.99);
    if (!(rho > 0.0 && rho <= 1.0)) throw InvalidSpec("rho must lie in (0, 1]");
  }
  if (family == Family::ChebNodes2 && !(param("a", -5.0) < param("b", 5.0)))
    throw InvalidSpec("interval must satisfy a < b");
  if (family == Family::FromFile && path.empty()) throw InvalidSpec("file family needs params.path");
}

ProblemSpec specFromJson(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidSpec(std::string("malformed spec JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidSpec("spec must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "family" && key != "n" && key != "delta" && key != "seed" && key != "params")
      throw InvalidSpec("unknown spec field '" + key + "'");
  }
  if (!j.contains("family") || !j["family"].is_string()) throw InvalidSpec("spec needs a family");
  ProblemSpec s = ProblemSpec::defaults(parseFamily(j["family"].get<std::string>()));
  try {
    if (j.contains("n")) s.n = j["n"].get<std::size_t>();
    if (j.contains("delta")) s.delta = j["delta"].get<double>();
    if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("params")) {
      if (!j["params"].is_object()) throw InvalidSpec("params must be an object");
      for (const auto& [key, value] : j["params"].items()) {
        if (key == "path") {
          s.path = value.get<std::string>();
        } else {
          if (!value.is_number()) throw InvalidSpec("parameter '" + key + "' must be numeric");
          s.params[key] = value.get<double>();
        }
      }
    }
  } catch (const json::exception& e) {
    throw InvalidSpec(std::string("bad spec field: ") + e.what());
  }
  s.validate();
  return s;
}

std::string specToJson(const ProblemSpec& spec) {
  json params = json::object();
  for (const auto& [key, value] : spec.params) params[key] = value;
  if (!spec.path.empty()) params["path"] = spec.path;
  json j{{"family", std::string(familyName(spec.family))},
         {"n", spec.n},
         {"delta", spec.delta},
         {"seed", spec.seed},
         {"params", params}};
  return j.dump(2);
}

Vector familySpectrum(const ProblemSpec& spec) {
  const std::size_t n = spec.n;
  const double nd = static_cast<double>(n);
  Vector d(n);
  switch (spec.family) {
    case Family::Evenly1a:
      for (std::size_t i = 1; i <= n; ++i) {
        const double id = static_cast<double>(i);
        d[i - 1] = i <= n / 2 ? -2.0 + 4.0 * (id - 1.0) / nd : 2.0 - 4.0 * (nd - id) / nd;
      }
      break;
    case Family::Exp1b:
      for (std::size_t i = 1; i <= n; ++i) {
        const double id = static_cast<double>(i);
        d[i - 1] = i <= n / 2 ? -std::exp(2.0 * id / nd) : std::exp((2.0 * id - nd) / nd);
      }
      break;
    case Family::ChebNodes2: {
      const double a = spec.param("a", -5.0);
      const double b = spec.param("b", 5.0);
      for (std::size_t j = 1; j <= n; ++j) {
        const double node = std::cos((2.0 * static_cast<double>(j) - 1.0) * std::numbers::pi / (2.0 * nd));
        d[j - 1] = 0.5 * (a + b) + 0.5 * (b - a) * node;
      }
      break;
    }
    case Family::Strakos3: {
      const double a1 = spec.param("alpha1", 8.0);
      const double an = spec.param("alphaN", -2.0);
      const double rho = spec.param("rho", 0.99);
      const bool mirror = spec.param("mirror", 1.0) != 0.0;
      const double from = mirror ? an : a1;
      const double to = mirror ? a1 : an;
      for (std::size_t i = 1; i <= n; ++i) {
        const double frac = (static_cast<double>(i) - 1.0) / (nd - 1.0);
        d[i - 1] = from + frac * (to - from) * std::pow(rho, static_cast<double>(n - i));
      }
      break;
    }
    default:
      throw InvalidSpec("family " + std::string(familyName(spec.family)) +
                        " has no closed-form spectrum");
  }
  return d;
}

Vector toEigenbasis(const ProblemInstance& inst, std::span<const double> x) {
  Vector y(x.begin(), x.end());
  for (const auto& u : inst.reflectors) applyReflector(u, y);
  return y;
}

Vector fromEigenbasis(const ProblemInstance& inst, std::span<const double> x) {
  Vector y(x.begin(), x.end());
  for (auto it = inst.reflectors.rbegin(); it != inst.reflectors.rend(); ++it) applyReflector(*it, y);
  return y;
}

ProblemInstance generate(const ProblemSpec& spec) {
  spec.validate();
  if (spec.family == Family::FromFile) {
    SymmetricLinearOperator a = readMatrixMarket(spec.path);
    Vector g = gaussianUnit(a.dimension(), spec.seed);
    return ProblemInstance{std::move(a), std::move(g), std::nullopt, {}, std::nullopt};
  }
  const std::size_t n = spec.n;
  Vector g = gaussianUnit(n, spec.seed);

  if (spec.family == Family::RandomSym4) {
    std::mt19937_64 rng(spec.seed ^ kMatrixStream);
    std::normal_distribution<double> normal;
    DenseMatrix gm(n, n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) gm(i, j) = normal(rng);
    DenseSymmetric sym(n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = j; i < n; ++i) sym.set(i, j, gm(i, j) + gm(j, i));
    const EigenRange r = extremalEigTridiagonal(householderTridiagonalize(sym), 1e-13);
    const double norm = std::max(std::abs(r.min), std::abs(r.max));
    DenseSymmetric scaled(n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = j; i < n; ++i) scaled.set(i, j, sym(i, j) / norm);
    return ProblemInstance{SymmetricLinearOperator::fromDense(std::move(scaled)), std::move(g),
                           std::nullopt, {}, EigenRange{r.min / norm, r.max / norm}};
  }

  Vector d = familySpectrum(spec);
  const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
  const EigenRange range{*lo, *hi};
  const auto count = static_cast<std::size_t>(spec.param("reflectors", 0.0));
  if (count == 0) {
    return ProblemInstance{SymmetricLinearOperator::fromDiagonal(d), std::move(g), d, {}, range};
  }

  std::vector<Vector> reflectors;
  std::mt19937_64 rng(spec.seed ^ kMatrixStream);
  for (std::size_t r = 0; r < count; ++r) reflectors.push_back(gaussianUnit(n, rng()));
  auto diag = std::make_shared<const Vector>(d);
  auto refl = std::make_shared<const std::vector<Vector>>(reflectors);
  SymmetricLinearOperator a(n, [diag, refl](std::span<const double> x, std::span<double> y) {
    std::copy(x.begin(), x.end(), y.begin());
    for (const auto& u : *refl) applyReflector(u, y);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] *= (*diag)[i];
    for (auto it = refl->rbegin(); it != refl->rend(); ++it) applyReflector(*it, y);
  });
  return ProblemInstance{std::move(a), std::move(g), std::move(d), std::move(reflectors), range};
}

ReferenceSolution referenceSolution(const ProblemInstance& inst, double delta) {
  ReferenceSolution ref;
  const SymmetricLinearOperator& a = inst.a;
  const EigenRange range = inst.range ? *inst.range : spectralRange(a);
  ref.alpha1 = range.max;
  ref.alphaN = range.min;

  if (inst.eigenvalues) {
    const Vector& theta = *inst.eigenvalues;
    const Vector c = toEigenbasis(inst, inst.g);
    const TrsSolution sol = solveTrsEigenbasis(theta, c, delta);
    ref.lambdaOpt = sol.lambda;
    ref.sOpt = fromEigenbasis(inst, sol.h);
    ref.method = "secular";
    // exact eigenvector of the augmented matrix in the same basis
    Vector y2(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) y2[i] = sol.h[i] / (theta[i] + sol.lambda);
    ReferenceEigenpair eig;
    eig.y1 = ref.sOpt;
    eig.y2 = fromEigenbasis(inst, y2);
    const double nrm = std::hypot(norm2(eig.y1), norm2(eig.y2));
    scale(1.0 / nrm, eig.y1);
    scale(1.0 / nrm, eig.y2);
    eig.y1Norm = norm2(eig.y1);
    ref.eigenpair = std::move(eig);
  } else {
    GltrOptions opts;
    opts.residTol = 1e-14;
    opts.kMax = std::min<std::size_t>(a.dimension(), 2000);
    opts.secular.tol = 1e-15;
    const GltrResult r = gltrSolve(a, inst.g, delta, opts);
    ref.lambdaOpt = r.lambda;
    ref.sOpt = r.s;
    ref.method = "gltr";
    ref.eigenpair = referenceEigenpair(a, ref.lambdaOpt, ref.sOpt);
  }
  ref.qOpt = objectiveDirect(a, inst.g, ref.sOpt);
  ref.y1Norm = ref.eigenpair.y1Norm;
  const SpectrumData sd = spectrumData(ref.alpha1, ref.alphaN, ref.lambdaOpt, norm2(inst.g), delta);
  ref.kappa = sd.kappa;
  ref.t = sd.t;
  ref.normM = operatorNorm2(AugmentedOperator(a, inst.g, delta).asLinearOperator(), 1e-8, 1000).value;
  ref.kkt = checkKkt(a, inst.g, delta, ref.lambdaOpt, ref.sOpt, 1e-12, ref.alphaN);
  return ref;
}

ExperimentTable runExperiment(const ProblemSpec& spec, const ExperimentOptions& opts) {
  return runExperiment(spec, generate(spec), opts);
}

ExperimentTable runExperiment(const ProblemSpec& spec, const ProblemInstance& inst,
                              const ExperimentOptions& opts) {
  ExperimentTable table;
  table.spec = spec;
  table.reference = referenceSolution(inst, spec.delta);
  const ReferenceSolution& ref = table.reference;
  const double delta = spec.delta;
  const double beta0 = norm2(inst.g);
  table.spectrum = spectrumData(ref.alpha1, ref.alphaN, ref.lambdaOpt, beta0, delta);
  const SpectrumData& sd = table.spectrum;
  table.normA = std::max(std::abs(ref.alpha1), std::abs(ref.alphaN));
  table.scale = table.normA * delta + beta0;

  GltrOptions gopts;
  gopts.residTol = opts.residTol;
  gopts.kMax = opts.kMax;
  gopts.verifyResiduals = true;
  const GltrResult run = gltrSolve(inst.a, inst.g, delta, gopts);
  table.termination = run.termination;
  const LanczosFactorization& f = run.factorization;

  const double sNorm = norm2(ref.sOpt);
  const double cgLimit = -dot(inst.g, ref.sOpt) / (beta0 * beta0);
  const double shiftNorm = sd.alpha1 + sd.lambdaOpt;
  const bool haveSpread = sd.alpha1 > sd.alphaN;

  // residual vectors of the projections onto the growing Krylov space
  Vector restS = ref.sOpt;
  Vector restY1 = ref.eigenpair.y1;
  Vector restY2 = ref.eigenpair.y2;

  std::unique_ptr<AugmentedOperator> augmented;
  if (opts.gammaTilde) augmented = std::make_unique<AugmentedOperator>(inst.a, inst.g, delta);

  const std::size_t last = run.history.size() - 1;
  for (std::size_t k = 0; k <= last; ++k) {
    const ConvergenceRecord& rec = run.history[k];
    const Vector& h = run.reducedSolutions[k];
    const SymmetricTridiagonal tk = f.T.leading(k + 1);
    const Vector sk = expandReduced(f.Q, h);

    const auto qk = f.Q.col(k);
    axpy(-dot(qk, restS), qk, restS);
    axpy(-dot(qk, restY1), qk, restY1);
    axpy(-dot(qk, restY2), qk, restY2);

    ExperimentRow row;
    RowDiagnostics dg;
    row.k = static_cast<double>(k);
    dg.k = k;
    dg.lambda = rec.lambda;
    dg.q = rec.q;
    dg.qDirect = rec.qDirect.value_or(kNaN);
    dg.caseTag = rec.caseTag;

    const EtaFactors eta = etaFactors(tk, sd.lambdaOpt, beta0, delta, sd.alpha1);
    dg.eta1 = eta.eta1;
    dg.eta2 = eta.eta2;
    dg.eta1Cap = eta.cap1;
    dg.eta2Cap = eta.cap2;

    row.lambdaGap = sd.lambdaOpt - rec.lambda;
    row.lambdaGapBound = lambdaGapBound(k, sd, eta.eta1, eta.eta2);
    const SolutionAngle angle = solutionSine(sk, ref.sOpt);
    row.sinAngle = angle.sine;
    row.sinAngleBound = kNaN;
    row.qGap = rec.q - ref.qOpt;
    row.qGapBound = qGapBound(k, sd);
    row.resid = rec.residExplicit.value_or(kNaN);
    row.residFormula = rec.residFormula;
    row.residBound = residualBound(k, sd, eta.eta1, eta.eta2);
    row.sGap = angle.relError * sNorm;
    row.sGapBound = sGapBound(k, sd);
    const Vector e1x = solveShifted(tk, sd.lambdaOpt, unitVector(k + 1, 0));
    row.cgGap = cgLimit - e1x[0];
    row.cgGapBound = cgEnergyBound(k, sd);

    dg.krylovDistance = norm2(restS) / sNorm;
    dg.krylovDistanceBound = cgDistanceBound(k, sd);
    dg.subspaceSine = std::hypot(norm2(restY1), norm2(restY2));
    dg.y2Distance = norm2(restY2);
    dg.qIntermediate = 2.0 * shiftNorm * dot(restS, restS);
    dg.subspaceSineBound = haveSpread ? sinSubspaceBound(k, sd, ref.y1Norm) : kNaN;
    dg.y2DistanceBound = haveSpread ? y2DistanceBound(k, sd, ref.y1Norm) : kNaN;
    dg.sep = kNaN;
    dg.gamma = kNaN;
    dg.firstLambdaBound = kNaN;

    if (rec.caseTag == CaseTag::Boundary && rec.lambda > 0.0) {
      const AugmentedEigenpair pair =
          eigpairFromTrs(tk, rec.lambda, h, beta0, delta, std::numeric_limits<double>::infinity());
      dg.eigResidual = pair.residual / pair.normM;
      dg.sLambda = spectralCondition(tk, rec.lambda, pair.z1);
      const bool checkpoint = (opts.checkpointEvery > 0 && k % opts.checkpointEvery == 0) || k == last;
      if (checkpoint) {
        Vector z(pair.z1);
        z.insert(z.end(), pair.z2.begin(), pair.z2.end());
        dg.sep = separation(assembleProjectedM(tk, beta0, delta), z, sd.lambdaOpt);
        if (dg.sep > 0.0 && haveSpread) row.sinAngleBound = sinAngleBound(k, sd, ref.normM, dg.sep);
        if (augmented && haveSpread) {
          dg.gamma = gammaTilde(*augmented, f.Q, k + 1);
          dg.firstLambdaBound = firstLambdaBound(k, sd, dg.sLambda, dg.gamma, ref.y1Norm);
        }
      }
    } else {
      dg.eigResidual = kNaN;
      dg.sLambda = kNaN;
    }

    if (!table.k0 && row.lambdaGap <= sd.alphaN + sd.lambdaOpt) table.k0 = k;
    table.rows.push_back(row);
    table.diagnostics.push_back(dg);
  }
  return table;
}

// ---------------------------------------------------------------------------
// Emission

const char* const kCsvHeader =
    "k,lambda_gap,lambda_gap_bound,sin_angle,sin_angle_bound,q_gap,q_gap_bound,resid,"
    "resid_formula,resid_bound,s_gap,s_gap_bound,cg_gap,cg_gap_bound";

std::array<double, ExperimentRow::kColumns> ExperimentRow::values() const {
  return {k,    lambdaGap,    lambdaGapBound, sinAngle, sinAngleBound, qGap,  qGapBound,
          resid, residFormula, residBound,    sGap,     sGapBound,     cgGap, cgGapBound};
}

ExperimentRow ExperimentRow::fromValues(const std::array<double, kColumns>& v) {
  ExperimentRow r;
  r.k = v[0];
  r.lambdaGap = v[1];
  r.lambdaGapBound = v[2];
  r.sinAngle = v[3];
  r.sinAngleBound = v[4];
  r.qGap = v[5];
  r.qGapBound = v[6];
  r.resid = v[7];
  r.residFormula = v[8];
  r.residBound = v[9];
  r.sGap = v[10];
  r.sGapBound = v[11];
  r.cgGap = v[12];
  r.cgGapBound = v[13];
  return r;
}

namespace {

std::string formatNumber(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed4(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

void writeText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

double jsonNumber(double v) { return std::isfinite(v) ? v : 0.0; }

}  // namespace

std::string formatCsv(const std::vector<ExperimentRow>& rows) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : rows) {
    const auto v = r.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ',';
      out += i == 0 ? std::to_string(static_cast<long long>(v[0])) : formatNumber(v[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<ExperimentRow> parseCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw ParseError("unexpected CSV header", 1);
  std::vector<ExperimentRow> rows;
  std::size_t lineNo = 1;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    std::array<double, ExperimentRow::kColumns> v{};
    std::istringstream fields(line);
    std::string cell;
    std::size_t i = 0;
    while (std::getline(fields, cell, ',')) {
      if (i >= v.size()) throw ParseError("too many columns", lineNo);
      char* end = nullptr;
      v[i] = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') throw ParseError("bad number '" + cell + "'", lineNo);
      ++i;
    }
    if (i != v.size()) throw ParseError("too few columns", lineNo);
    rows.push_back(ExperimentRow::fromValues(v));
  }
  return rows;
}

std::string formatPlotScript(const ExperimentTable& table, const std::string& csvName) {
  std::string stem = csvName;
  if (const auto dot = stem.rfind(".csv"); dot != std::string::npos) stem.erase(dot);
  std::ostringstream p;
  p << "# Convergence of the Lanczos trust-region iteration for problem family "
    << familyName(table.spec.family) << " (n = " << table.spec.n << ", seed = " << table.spec.seed
    << ").\n"
    << "# Values below 1e-16 are drawn at 1e-16; the CSV keeps them unclipped.\n"
    << "set datafile separator ','\n"
    << "set datafile missing 'nan'\n"
    << "set terminal pngcairo size 1200,900\n"
    << "set output '" << stem << ".png'\n"
    << "set logscale y\n"
    << "set format y '10^{%L}'\n"
    << "set xlabel 'k'\n"
    << "set key top right\n"
    << "clip(x) = (x < 1e-16 ? 1e-16 : x)\n"
    << "data = '" << csvName << "'\n"
    << "set multiplot layout 2,2\n";
  struct Panel {
    const char* title;
    int measured;
    int bound;
    const char* label;
  };
  const Panel panels[] = {{"(a) lambda_{opt} - lambda_k and its bound", 2, 3, "lambda gap"},
                          {"(b) sin angle(s_k, s_{opt}) and its bound", 4, 5, "sine"},
                          {"(c) ||(A+lambda_k I)s_k + g|| and its bound", 8, 10, "residual"},
                          {"(d) q(s_k) - q(s_{opt}) and its bound", 6, 7, "q gap"}};
  for (const auto& panel : panels) {
    p << "set title '" << panel.title << "'\n"
      << "plot data every ::1 using 1:(clip($" << panel.measured << ")) with linespoints pt 7 ps 0.5 title '"
      << panel.label << "', \\\n"
      << "     data every ::1 using 1:(clip($" << panel.bound << ")) with linespoints pt 6 ps 0.5 title 'bound'\n";
  }
  p << "unset multiplot\n";
  return p.str();
}

std::string summaryJson(const ExperimentTable& table) {
  const ReferenceSolution& ref = table.reference;
  const SpectrumData& sd = table.spectrum;
  json params = json::object();
  for (const auto& [key, value] : table.spec.params) params[key] = value;
  if (!table.spec.path.empty()) params["path"] = table.spec.path;
  json j;
  j["family"] = std::string(familyName(table.spec.family));
  j["n"] = table.spec.n;
  j["delta"] = table.spec.delta;
  j["seed"] = table.spec.seed;
  j["params"] = params;
  j["alpha1"] = sd.alpha1;
  j["alpha_n"] = sd.alphaN;
  j["kappa"] = sd.kappa;
  j["t"] = sd.t;
  j["lambda_opt"] = sd.lambdaOpt;
  j["q_opt"] = ref.qOpt;
  j["norm_M"] = ref.normM;
  j["y1_norm"] = ref.y1Norm;
  j["reference_method"] = ref.method;
  j["reference_kkt"] = {{"feasibility_gap", ref.kkt.feasibilityGap},
                        {"stationarity", ref.kkt.stationarity},
                        {"complementarity", ref.kkt.complementarity},
                        {"curvature_margin", ref.kkt.curvatureMargin},
                        {"pass", ref.kkt.pass}};
  j["iterations"] = table.rows.size();
  j["termination"] = std::string(terminationName(table.termination));
  j["k0"] = table.k0 ? json(*table.k0) : json(nullptr);
  j["final_lambda_gap"] = table.rows.empty() ? 0.0 : jsonNumber(table.rows.back().lambdaGap);
  j["table"] = {{"alpha1", fixed4(sd.alpha1)}, {"alpha_n", fixed4(sd.alphaN)},
                {"kappa", fixed4(sd.kappa)},   {"t", fixed4(sd.t)},
                {"lambda_opt", fixed4(sd.lambdaOpt)}, {"q_opt", fixed4(ref.qOpt)}};
  return j.dump(2) + "\n";
}

void emitCsv(const ExperimentTable& table, const std::filesystem::path& path) {
  if (table.rows.empty()) throw Error("refusing to write an empty table");
  writeText(path, formatCsv(table.rows));
}

void emitPlotScript(const ExperimentTable& table, const std::filesystem::path& path,
                    const std::string& csvName) {
  if (table.rows.empty()) throw Error("refusing to write a plot for an empty table");
  writeText(path, formatPlotScript(table, csvName));
}

void writeExperimentOutputs(const ExperimentTable& table, const std::filesystem::path& dir,
                            const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  emitCsv(table, dir / (name + ".csv"));
  emitPlotScript(table, dir / (name + ".plt"), name + ".csv");
  writeText(dir / (name + ".summary.json"), summaryJson(table));
}

std::optional<RateFit> fitRate(const std::vector<double>& ks, const std::vector<double>& values,
                               double low, double high) {
  std::size_t first = values.size();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > low && values[i] <= high) {
      first = i;
      break;
    }
  }
  std::vector<std::size_t> idx;
  for (std::size_t i = first; i < values.size(); ++i) {
    if (!(values[i] > low)) break;
    idx.push_back(i);
  }
  if (idx.size() < 3) return std::nullopt;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i : idx) {
    const double x = ks[i];
    const double y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(idx.size());
  RateFit fit;
  fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  fit.points = idx.size();
  fit.kFirst = static_cast<std::size_t>(ks[idx.front()]);
  fit.kLast = static_cast<std::size_t>(ks[idx.back()]);
  return fit;
}

}  // namespace trslab
