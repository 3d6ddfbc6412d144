#include "trslab/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "trslab/bounds.hpp"
#include "trslab/eig_equiv.hpp"
#include "trslab/errors.hpp"
#include "trslab/trs_solver.hpp"

namespace trslab {
namespace {

PropertyResult atMost(std::string suite, std::string name, double measured, double limit,
                      std::string detail = {}) {
  PropertyResult r{std::move(suite), std::move(name), measured, limit, limit - measured,
                   measured <= limit, std::move(detail)};
  if (std::isnan(measured)) r.pass = false;
  return r;
}

PropertyResult inRange(std::string suite, std::string name, double measured, double lo, double hi,
                       std::string detail = {}) {
  PropertyResult r;
  r.suite = std::move(suite);
  r.name = std::move(name);
  r.measured = measured;
  r.limit = hi;
  r.margin = std::min(measured - lo, hi - measured);
  r.pass = measured >= lo && measured < hi;
  r.detail = std::move(detail);
  return r;
}

PropertyResult flag(std::string suite, std::string name, bool ok, std::string detail) {
  return {std::move(suite), std::move(name), ok ? 0.0 : 1.0, 0.0, ok ? 0.0 : -1.0, ok,
          std::move(detail)};
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double lsSlope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Slope of ln f(k) over k in [k1, k2].
double formulaSlope(const std::function<double(std::size_t)>& f, std::size_t k1, std::size_t k2) {
  std::vector<double> xs, ys;
  for (std::size_t k = k1; k <= k2; ++k) {
    const double v = f(k);
    if (!(v > 0.0) || !std::isfinite(v)) continue;
    xs.push_back(static_cast<double>(k));
    ys.push_back(std::log(v));
  }
  if (xs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  return lsSlope(xs, ys);
}

double lastFinite(const std::vector<RowDiagnostics>& d, double RowDiagnostics::*field) {
  for (auto it = d.rbegin(); it != d.rend(); ++it)
    if (std::isfinite((*it).*field)) return (*it).*field;
  return std::numeric_limits<double>::quiet_NaN();
}

std::optional<std::size_t> firstBelow(const std::vector<ExperimentRow>& rows,
                                      double ExperimentRow::*field, double level) {
  for (const auto& r : rows)
    if (r.*field <= level) return static_cast<std::size_t>(r.k);
  return std::nullopt;
}

}  // namespace

bool VerifyReport::pass() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
}

unsigned threadBudget() {
  if (const char* env = std::getenv("TRSLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<PropertyResult> checkTable(const ExperimentTable& table, const FloorPolicy& floor) {
  const std::string suite = "family " + std::string(familyName(table.spec.family));
  const auto& rows = table.rows;
  const auto& diag = table.diagnostics;
  const SpectrumData& sd = table.spectrum;
  const double lamOpt = sd.lambdaOpt;
  const double qOpt = table.reference.qOpt;
  const std::size_t k0 = table.k0.value_or(std::numeric_limits<std::size_t>::max());
  std::vector<PropertyResult> out;

  double residId = 0, objId = 0, eigRes = 0, lamDrop = 0, lamOver = -1e300, qRise = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    residId = std::max(residId, std::abs(rows[i].resid - rows[i].residFormula) / table.scale);
    objId = std::max(objId, std::abs(diag[i].q - diag[i].qDirect) / std::max(1.0, std::abs(diag[i].q)));
    if (std::isfinite(diag[i].eigResidual)) eigRes = std::max(eigRes, diag[i].eigResidual);
    lamOver = std::max(lamOver, diag[i].lambda - lamOpt);
    if (i > 0) {
      lamDrop = std::max(lamDrop, diag[i - 1].lambda - diag[i].lambda);
      qRise = std::max(qRise, diag[i].q - diag[i - 1].q);
    }
  }
  out.push_back(atMost(suite, "residual identity", residId, 1e-9, "max |resid - formula| / scale"));
  out.push_back(atMost(suite, "objective identity", objId, 1e-10, "max relative |q - q_direct|"));
  out.push_back(atMost(suite, "projected eigenpair", eigRes, 1e-10, "max ||M_k z - lambda_k z|| / ||M_k||"));
  out.push_back(atMost(suite, "lambda nondecreasing", lamDrop, floor.relative * (1.0 + std::abs(lamOpt)),
                       "largest drop between consecutive iterates"));
  out.push_back(atMost(suite, "lambda below optimum", lamOver, 1e-10, "max lambda_k - lambda_opt"));
  out.push_back(atMost(suite, "q nonincreasing", qRise, floor.relative * (1.0 + std::abs(qOpt)),
                       "largest rise between consecutive iterates"));

  struct Column {
    const char* name;
    double ExperimentRow::*measured;
    double ExperimentRow::*bound;
    double floor;
    bool asymptotic;
  };
  const Column cols[] = {
      {"lambda gap bound", &ExperimentRow::lambdaGap, &ExperimentRow::lambdaGapBound,
       floor.relative * (1.0 + std::abs(lamOpt)), true},
      {"q gap bound", &ExperimentRow::qGap, &ExperimentRow::qGapBound,
       floor.relative * (1.0 + std::abs(qOpt)), false},
      {"sine bound", &ExperimentRow::sinAngle, &ExperimentRow::sinAngleBound, floor.relative, true},
      {"s gap bound", &ExperimentRow::sGap, &ExperimentRow::sGapBound,
       floor.relative * table.spec.delta, false},
      {"residual bound", &ExperimentRow::resid, &ExperimentRow::residBound,
       floor.relative * table.scale, true},
      {"cg energy bound", &ExperimentRow::cgGap, &ExperimentRow::cgGapBound, floor.relative, false},
  };
  for (const auto& c : cols) {
    double worst = 0.0;
    std::size_t checked = 0, worstK = 0;
    for (const auto& r : rows) {
      const double m = r.*c.measured;
      const double b = r.*c.bound;
      if (c.asymptotic && static_cast<std::size_t>(r.k) < k0) continue;
      if (!std::isfinite(b) || !(m > c.floor)) continue;
      ++checked;
      const double ratio = m / b;
      if (ratio > worst || !(b > 0.0)) {
        worst = b > 0.0 ? ratio : std::numeric_limits<double>::infinity();
        worstK = static_cast<std::size_t>(r.k);
      }
    }
    out.push_back(atMost(suite, c.name, worst, 1.0,
                         "max measured/bound over " + std::to_string(checked) + " rows (worst k=" +
                             std::to_string(worstK) + ")"));
  }

  double kd = 0.0, ss = 0.0;
  for (const auto& d : diag) {
    if (d.krylovDistance > floor.relative && std::isfinite(d.krylovDistanceBound))
      kd = std::max(kd, d.krylovDistance / d.krylovDistanceBound);
    if (d.subspaceSine > floor.relative && std::isfinite(d.subspaceSineBound))
      ss = std::max(ss, d.subspaceSine / d.subspaceSineBound);
  }
  out.push_back(atMost(suite, "krylov distance bound", kd, 1.0, "max measured/bound"));
  out.push_back(atMost(suite, "subspace sine bound", ss, 1.0, "max measured/bound"));
  return out;
}

RateSummary measureRates(const ExperimentTable& table) {
  RateSummary rs;
  const SpectrumData& sd = table.spectrum;
  rs.logT = std::log(sd.t);
  std::vector<double> ks;
  std::vector<double> lg, qg, sn, rr;
  for (const auto& r : table.rows) {
    ks.push_back(r.k);
    lg.push_back(r.lambdaGap);
    qg.push_back(r.qGap);
    sn.push_back(r.sinAngle);
    rr.push_back(r.resid);
  }
  if (ks.empty()) return rs;
  const double lamScale = 1.0 + std::abs(sd.lambdaOpt);
  const double qScale = 1.0 + std::abs(table.reference.qOpt);
  rs.lambdaGap = fitRate(ks, lg, 1e-12 * lamScale, 1e-2 * lg.front());
  rs.qGap = fitRate(ks, qg, 1e-12 * qScale, 1e-2 * qg.front());
  rs.sine = fitRate(ks, sn, 1e-12, 1e-2 * sn.front());
  rs.resid = fitRate(ks, rr, 1e-12 * table.scale, 1e-2 * rr.front());

  const auto windowSlope = [&](const std::optional<RateFit>& fit, double ExperimentRow::*col) {
    if (!fit) return std::numeric_limits<double>::quiet_NaN();
    std::vector<double> xs, ys;
    for (const auto& r : table.rows) {
      const auto k = static_cast<std::size_t>(r.k);
      if (k < fit->kFirst || k > fit->kLast) continue;
      xs.push_back(r.k);
      ys.push_back(std::log(r.*col));
    }
    return xs.size() >= 2 ? lsSlope(xs, ys) : std::numeric_limits<double>::quiet_NaN();
  };
  rs.lambdaBoundSlope = windowSlope(rs.lambdaGap, &ExperimentRow::lambdaGapBound);
  rs.qBoundSlope = windowSlope(rs.qGap, &ExperimentRow::qGapBound);

  const double sep = lastFinite(table.diagnostics, &RowDiagnostics::sep);
  const double eta1 = table.diagnostics.empty() ? 1.0 : table.diagnostics.back().eta1;
  const double eta2 = table.diagnostics.empty() ? 1.0 : table.diagnostics.back().eta2;
  const std::size_t kA = static_cast<std::size_t>(std::min(400.0, 250.0 / std::abs(rs.logT)));
  const std::size_t kB = kA + 50;
  rs.sineBoundSlope = sep > 0.0 ? formulaSlope([&](std::size_t k) {
                                    return sinAngleBound(k, sd, table.reference.normM, sep);
                                  }, kA, kB)
                                : std::numeric_limits<double>::quiet_NaN();
  rs.residBoundSlope =
      formulaSlope([&](std::size_t k) { return residualBound(k, sd, eta1, eta2); }, kA, kB);
  return rs;
}

namespace {

std::vector<PropertyResult> rateProperties(const ExperimentTable& table) {
  const std::string suite = "family " + std::string(familyName(table.spec.family));
  const RateSummary rs = measureRates(table);
  const double lt = rs.logT;
  std::vector<PropertyResult> out;
  const auto fitted = [&](const char* name, const std::optional<RateFit>& fit, double target) {
    if (!fit) {
      out.push_back(flag(suite, name, false, "fewer than three points in the linear regime"));
      return;
    }
    out.push_back(inRange(suite, name, fit->slope, 1.15 * target, 0.0,
                          fmt("slope vs target %.4f", target) + " over k=" +
                              std::to_string(fit->kFirst) + ".." + std::to_string(fit->kLast)));
  };
  fitted("lambda gap rate", rs.lambdaGap, 2.0 * lt);
  fitted("q gap rate", rs.qGap, 2.0 * lt);
  fitted("sine rate", rs.sine, lt);
  fitted("residual rate", rs.resid, lt);
  const auto boundSlope = [&](const char* name, double slope, double target) {
    out.push_back(atMost(suite, name, std::abs(slope / target - 1.0), 0.02,
                         fmt("slope %.5f vs %.5f", slope, target)));
  };
  boundSlope("lambda bound slope", rs.lambdaBoundSlope, 2.0 * lt);
  boundSlope("q bound slope", rs.qBoundSlope, 2.0 * lt);
  boundSlope("sine bound slope", rs.sineBoundSlope, lt);
  boundSlope("residual bound slope", rs.residBoundSlope, lt);

  const auto kLam = firstBelow(table.rows, &ExperimentRow::lambdaGap, 1e-10);
  const auto kRes = firstBelow(table.rows, &ExperimentRow::resid, 1e-10);
  if (kLam && kRes && *kRes > 0) {
    out.push_back(atMost(suite, "lambda needs fewer iterations",
                         static_cast<double>(*kLam) / static_cast<double>(*kRes), 0.65,
                         "k(lambda gap <= 1e-10) / k(residual <= 1e-10) = " + std::to_string(*kLam) +
                             "/" + std::to_string(*kRes)));
  } else {
    out.push_back(flag(suite, "lambda needs fewer iterations", false, "threshold not reached"));
  }
  return out;
}

std::vector<PropertyResult> tableProperties(const ExperimentTable& table) {
  const std::string suite = "family " + std::string(familyName(table.spec.family));
  std::vector<PropertyResult> out;
  const auto round4 = [](double x) { return std::round(x * 1e4) / 1e4; };
  const auto& ref = table.reference;
  switch (table.spec.family) {
    case Family::Evenly1a: {
      const auto kl = firstBelow(table.rows, &ExperimentRow::lambdaGap, 1e-12);
      const auto ks = firstBelow(table.rows, &ExperimentRow::sinAngle, 1e-13);
      out.push_back(inRange(suite, "k(lambda gap <= 1e-12)", kl ? double(*kl) : 1e9, 34 * 0.7,
                            34 * 1.3 + 1e-9));
      out.push_back(inRange(suite, "k(sine <= 1e-13)", ks ? double(*ks) : 1e9, 67 * 0.7,
                            67 * 1.3 + 1e-9));
      break;
    }
    case Family::ChebNodes2:
      out.push_back(flag(suite, "alpha1 = 5, alphaN = -5",
                         round4(ref.alpha1) == 5.0 && round4(ref.alphaN) == -5.0,
                         fmt("%.6f, %.6f", ref.alpha1, ref.alphaN)));
      out.push_back(inRange(suite, "lambda_opt in [4.5, 6]", ref.lambdaOpt, 4.5, 6.0 + 1e-12));
      break;
    case Family::Strakos3:
      out.push_back(flag(suite, "alpha1 = 8, alphaN = -2",
                         round4(ref.alpha1) == 8.0 && round4(ref.alphaN) == -2.0,
                         fmt("%.6f, %.6f", ref.alpha1, ref.alphaN)));
      break;
    default:
      break;
  }
  return out;
}

std::vector<PropertyResult> oracleSuite(std::size_t instances) {
  std::mt19937_64 rng(20240917);
  std::normal_distribution<double> gauss;
  std::uniform_int_distribution<std::size_t> order(1, 40);
  std::uniform_real_distribution<double> uni(0.05, 3.0);
  double worstLam = 0, worstH = 0;
  std::size_t accepted = 0, rejected = 0, failures = 0;
  while (accepted < instances) {
    const std::size_t m = order(rng);
    SymmetricTridiagonal t;
    for (std::size_t j = 0; j < m; ++j) t.diag.push_back(gauss(rng));
    for (std::size_t j = 1; j < m; ++j) t.offdiag.push_back(gauss(rng));
    const double beta0 = uni(rng);
    const double delta = uni(rng);
    DenseSymmetric dense(m);
    for (std::size_t j = 0; j < m; ++j) {
      dense.set(j, j, t.diag[j]);
      if (j + 1 < m) dense.set(j + 1, j, t.offdiag[j]);
    }
    Vector rhs(m, 0.0);
    rhs[0] = beta0;
    TrsSolution slow;
    try {
      slow = solveTrsDense(dense, rhs, delta);
    } catch (const NearHardCase&) {
      ++rejected;
      continue;
    }
    // h is ill-conditioned in lambda when the shifted matrix is nearly singular
    if (slow.lambda + extremalEigTridiagonal(t).min < 1e-6) {
      ++rejected;
      continue;
    }
    ++accepted;
    try {
      const TrsSolution fast = solveTrsTridiagonal(t, beta0, delta);
      worstLam = std::max(worstLam, std::abs(fast.lambda - slow.lambda) / (1.0 + slow.lambda));
      Vector d = fast.h;
      axpy(-1.0, slow.h, d);
      worstH = std::max(worstH, norm2(d));
    } catch (const Error&) {
      ++failures;
    }
  }
  const std::string detail = std::to_string(instances) + " instances, " + std::to_string(rejected) +
                             " near-singular draws rejected";
  return {atMost("oracle", "tridiagonal vs eigendecomposition lambda", worstLam, 1e-9, detail),
          atMost("oracle", "tridiagonal vs eigendecomposition h", worstH, 1e-8, detail),
          atMost("oracle", "solver failures", static_cast<double>(failures), 0.0, detail)};
}

std::vector<PropertyResult> chebyshevSuite() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(-1.0, 1.0), ut(0.0, 0.9);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double x = ux(rng), t = ut(rng);
    const double exact = chebGeneratingClosedForm(t, x);
    worst = std::max(worst, std::abs(chebGeneratingPartialSum(2000, t, x) - exact) / std::abs(exact));
  }
  std::vector<PropertyResult> out;
  out.push_back(atMost("chebyshev", "generating identity", worst, 1e-8, "100 random (x, t)"));
  out.push_back(atMost("chebyshev", "x=0 t=0.5 truncation", std::abs(chebGeneratingPartialSum(60, 0.5, 0.0) - 0.48),
                       1e-6, "60 terms vs 0.48"));
  for (double t : {0.6, 0.8}) {
    const double eta = 0.5 * (t + 1.0 / t);
    const std::size_t k1 = 40, k2 = 60;
    const double ratio = std::pow(chebGenPolyGridError(k2, eta) / chebGenPolyGridError(k1, eta),
                                  1.0 / static_cast<double>(k2 - k1));
    out.push_back(atMost("chebyshev", fmt("grid error ratio (t=%.1f)", t), std::abs(ratio / t - 1.0), 0.10,
                         fmt("ratio %.5f vs t %.5f", ratio, t)));
  }
  return out;
}

std::vector<PropertyResult> mutationSuite() {
  // A sign flip in the rank-one block must be caught by the eigenpair check.
  SymmetricTridiagonal t{{1.0, -0.5, 2.0, 0.3}, {0.7, 0.4, -0.9}};
  const double beta0 = 1.3, delta = 0.8;
  const TrsSolution sol = solveTrsTridiagonal(t, beta0, delta);
  const AugmentedEigenpair pair = eigpairFromTrs(t, sol.lambda, sol.h, beta0, delta);
  DenseMatrix bad = assembleProjectedM(t, beta0, delta);
  bad(0, t.order()) = -bad(0, t.order());
  Vector z(pair.z1);
  z.insert(z.end(), pair.z2.begin(), pair.z2.end());
  Vector r = bad.multiply(z);
  axpy(-sol.lambda, z, r);
  const double relRes = norm2(r) / pair.normM;
  PropertyResult p;
  p.suite = "mutation";
  p.name = "flipped rank-one block detected";
  p.measured = relRes;
  p.limit = 1e-10;
  p.margin = relRes - 1e-10;
  p.pass = relRes > 1e-10;
  p.detail = "residual of the true pair against the mutated matrix";
  return {atMost("mutation", "true pair residual", pair.residual / pair.normM, 1e-10), p};
}

}  // namespace

VerifyReport runVerification(VerifyScale scale, unsigned threads) {
  struct Job {
    ProblemSpec spec;
    bool tableLevel;
  };
  std::vector<Job> jobs;
  for (Family f : {Family::Evenly1a, Family::Exp1b, Family::ChebNodes2, Family::Strakos3,
                   Family::RandomSym4})
    jobs.push_back({ProblemSpec::defaults(f), true});
  if (scale == VerifyScale::Full) {
    for (std::uint64_t seed : {2u, 3u}) {
      for (Family f : {Family::Evenly1a, Family::Exp1b, Family::ChebNodes2, Family::Strakos3}) {
        ProblemSpec s = ProblemSpec::defaults(f);
        s.seed = seed;
        jobs.push_back({s, true});
      }
    }
    ProblemSpec rotated = ProblemSpec::defaults(Family::Evenly1a);
    rotated.n = 1000;
    rotated.params["reflectors"] = 4;
    jobs.push_back({rotated, false});
  }

  VerifyReport report;
  std::mutex mu;
  std::vector<std::vector<PropertyResult>> perJob(jobs.size());
  std::atomic<std::size_t> nextJob{0};
  const auto worker = [&] {
    for (std::size_t i = nextJob++; i < jobs.size(); i = nextJob++) {
      std::vector<PropertyResult> res;
      const std::string suite = "family " + std::string(familyName(jobs[i].spec.family));
      const std::string tag = " (n=" + std::to_string(jobs[i].spec.n) +
                              ", seed=" + std::to_string(jobs[i].spec.seed) + ")";
      try {
        const ExperimentTable table = runExperiment(jobs[i].spec);
        res = checkTable(table);
        auto rates = rateProperties(table);
        res.insert(res.end(), rates.begin(), rates.end());
        if (jobs[i].tableLevel && jobs[i].spec.n == ProblemSpec::defaults(jobs[i].spec.family).n) {
          auto tl = tableProperties(table);
          res.insert(res.end(), tl.begin(), tl.end());
        }
      } catch (const std::exception& e) {
        res.push_back(flag(suite, "experiment ran", false, e.what()));
      }
      for (auto& r : res) r.suite += tag;
      std::lock_guard lock(mu);
      perJob[i] = std::move(res);
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (auto& r : oracleSuite(scale == VerifyScale::Full ? 500 : 100)) report.results.push_back(r);
  for (auto& r : chebyshevSuite()) report.results.push_back(r);
  for (auto& r : mutationSuite()) report.results.push_back(r);
  for (auto& v : perJob)
    for (auto& r : v) report.results.push_back(std::move(r));
  return report;
}

std::string formatReport(const VerifyReport& report) {
  std::ostringstream os;
  std::size_t failed = 0;
  for (const auto& r : report.results) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "measured %-12.4g limit %-10.4g margin %-11.4g", r.measured,
                  r.limit, r.margin);
    os << (r.pass ? "PASS " : "FAIL ") << r.suite << ": " << r.name << "  " << buf;
    if (!r.detail.empty()) os << "  (" << r.detail << ")";
    os << '\n';
    if (!r.pass) ++failed;
  }
  os << report.results.size() - failed << "/" << report.results.size() << " properties passed\n";
  return os.str();
}

}  // namespace trslab
